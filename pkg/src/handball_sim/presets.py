"""Named experiment bundles."""

from __future__ import annotations

from dataclasses import dataclass

from handball_sim.formats import KO, Design, SeedingPolicy, standard_designs
from handball_sim.montecarlo import SimulationConfig
from handball_sim.strength import BASELINE, StrengthParams

PRESETS = ("baseline", "sensitivity_alpha", "sensitivity_beta", "convergence", "validation")
DEFAULT_RUNS = 100_000
CONVERGENCE_CHECKPOINTS = (
    1_000, 2_500, 5_000, 10_000, 25_000, 50_000, 100_000,
    250_000, 500_000, 1_000_000, 2_500_000, 5_000_000, 10_000_000,
)
ALPHA_GRID = (3.0, 5.0)
BETA_GRID = (18.0, 36.0)


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    configs: tuple[tuple[str, SimulationConfig], ...]
    checkpoints: tuple[int, ...] = ()


def _grid(params: list[StrengthParams], tags: list[str], runs: int, seed: int, threads: int | None) -> tuple:
    return tuple(
        (tag, SimulationConfig(runs=runs, seed=seed, params=p, designs=tuple(standard_designs()), threads=threads))
        for tag, p in zip(tags, params)
    )


def expand(name: str, runs: int | None = None, seed: int = 0, threads: int | None = None) -> ExperimentPreset:
    """Configurations behind a preset name.

    ``validation`` has no configurations of its own; see :mod:`handball_sim.validation`.
    For ``convergence`` a given ``runs`` truncates the checkpoint schedule.
    """
    if name == "baseline":
        return ExperimentPreset(name, _grid([BASELINE], ["baseline"], runs or DEFAULT_RUNS, seed, threads))
    if name == "sensitivity_alpha":
        params = [StrengthParams(a, BASELINE.beta) for a in ALPHA_GRID]
        return ExperimentPreset(name, _grid(params, [f"alpha{a:g}" for a in ALPHA_GRID], runs or DEFAULT_RUNS, seed, threads))
    if name == "sensitivity_beta":
        params = [StrengthParams(BASELINE.alpha, b) for b in BETA_GRID]
        return ExperimentPreset(name, _grid(params, [f"beta{b:g}" for b in BETA_GRID], runs or DEFAULT_RUNS, seed, threads))
    if name == "convergence":
        checkpoints = CONVERGENCE_CHECKPOINTS
        if runs is not None:
            checkpoints = tuple(c for c in checkpoints if c < runs) + (runs,)
        config = SimulationConfig(runs=checkpoints[-1], seed=seed, designs=(Design(KO, SeedingPolicy.RANDOM),),
                                  threads=threads)
        return ExperimentPreset(name, (("convergence", config),), checkpoints)
    if name == "validation":
        return ExperimentPreset(name, ())
    raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
