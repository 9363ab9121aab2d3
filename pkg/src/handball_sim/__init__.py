"""Monte Carlo comparison of 24-team handball championship designs."""

from handball_sim.backend import BACKEND
from handball_sim.draw import GroupAssignment, draw_groups, identity_draw
from handball_sim.engine import GroupStanding, TournamentResult, match_count_distribution, play_group, play_tournament
from handball_sim.exact import exact_report
from handball_sim.formats import (
    FORMATS,
    G46,
    G64,
    G66,
    KO,
    RR,
    Design,
    FormatSpec,
    SeedingPolicy,
    StructuralError,
    get_format,
    standard_designs,
)
from handball_sim.metrics import Accumulator, MetricsReport, diff_vs_reference, finalize
from handball_sim.montecarlo import SimulationConfig, convergence_trace, generate_outcomes, run_experiment
from handball_sim.outcomes import OutcomeTables
from handball_sim.strength import StrengthParams, probability_matrix, win_probability

__version__ = "0.1.0"
