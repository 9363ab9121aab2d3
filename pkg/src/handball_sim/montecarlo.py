"""Monte Carlo driver.

Run ``r`` of an experiment is a pure function of ``(seed, r)``: one pair of
outcome tables is drawn per run and read by every design (common random
numbers), while draws and tie-breaks come from per-design substreams. Runs
are split into contiguous blocks across worker threads and the integer
tallies are summed in block order, so the thread count never changes a
reported number.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from handball_sim import backend as _backend
from handball_sim.formats import Design, standard_designs
from handball_sim.metrics import Accumulator, MetricsReport, finalize
from handball_sim.outcomes import OutcomeTables
from handball_sim.outcomes import generate_outcomes as _generate
from handball_sim.strength import BASELINE, StrengthParams, probability_matrix, validate_matrix

MIN_BLOCK = 2_000


@dataclass(frozen=True)
class SimulationConfig:
    runs: int = 100_000
    seed: int = 0
    params: StrengthParams = BASELINE
    designs: tuple[Design, ...] = field(default_factory=lambda: tuple(standard_designs()))
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)
    model: str | None = None
    threads: int | None = None
    backend: str | None = None

    def __post_init__(self) -> None:
        if isinstance(self.runs, bool) or not isinstance(self.runs, (int, np.integer)) or self.runs < 1:
            raise ValueError(f"runs must be a positive integer, got {self.runs!r}")
        if self.threads is not None and self.threads < 1:
            raise ValueError(f"threads must be positive, got {self.threads}")
        object.__setattr__(self, "designs", tuple(self.designs))
        if self.matrix is not None:
            object.__setattr__(self, "matrix", validate_matrix(self.matrix))
        sizes = {d.format.n_teams for d in self.designs}
        if len(sizes) > 1 or (sizes and sizes.pop() != self.win_matrix().shape[0]):
            raise ValueError("every design must use the same number of teams as the probability matrix")

    def win_matrix(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        n = self.designs[0].format.n_teams if self.designs else 24
        return probability_matrix(self.params, n)

    @property
    def model_label(self) -> str:
        if self.model:
            return self.model
        return "custom" if self.matrix is not None else self.params.label


def generate_outcomes(params: StrengthParams | np.ndarray, master_seed: int, run_index: int) -> OutcomeTables:
    """Outcome tables of run ``run_index`` (identical to what the simulator uses)."""
    matrix = probability_matrix(params) if isinstance(params, StrengthParams) else validate_matrix(params)
    return _generate(matrix, master_seed, run_index)


def _worker_count(config: SimulationConfig, runs: int) -> int:
    wanted = config.threads or os.cpu_count() or 1
    return max(1, min(wanted, runs // MIN_BLOCK or 1))


def _tally(config: SimulationConfig, designs: Sequence[Design], start: int, stop: int) -> list[Accumulator]:
    """Tallies of runs ``start .. stop-1``, merged across workers in block order."""
    matrix = config.win_matrix()
    runs = stop - start
    workers = _worker_count(config, runs)
    bounds = np.linspace(start, stop, workers + 1).astype(np.int64)
    blocks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    def job(block: tuple[int, int]) -> list[Accumulator]:
        return _backend.run_block(designs, matrix, config.seed, block[0], block[1], config.backend)

    if len(blocks) == 1:
        parts = [job(blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            parts = list(pool.map(job, blocks))
    total = [Accumulator(n_teams=matrix.shape[0]) for _ in designs]
    for part in parts:
        for acc, piece in zip(total, part):
            acc.merge(piece)
    return total


def run_experiment(config: SimulationConfig) -> dict[str, MetricsReport]:
    """Simulate every design of ``config`` and summarise each one, keyed by design name."""
    accs = _tally(config, config.designs, 0, config.runs)
    return {
        d.name: finalize(acc, design=d.name, model=config.model_label, seed=config.seed)
        for d, acc in zip(config.designs, accs)
    }


@dataclass(frozen=True)
class Checkpoint:
    runs: int
    best_team_win: float
    best_team_win_se: float
    top_two_final: float | None
    top_two_final_se: float | None


def convergence_trace(config: SimulationConfig, checkpoints: Sequence[int]) -> dict[str, list[Checkpoint]]:
    """Best-team win share and top-two final share after each checkpoint.

    The sample grows by appending runs, so every checkpoint contains all
    runs of the earlier ones.
    """
    checkpoints = list(checkpoints)
    if not checkpoints or any(c < 1 for c in checkpoints) or checkpoints != sorted(set(checkpoints)):
        raise ValueError("checkpoints must be strictly increasing positive run counts")
    n = config.win_matrix().shape[0]
    totals = [Accumulator(n_teams=n) for _ in config.designs]
    trace: dict[str, list[Checkpoint]] = {d.name: [] for d in config.designs}
    done = 0
    for cp in checkpoints:
        for acc, part in zip(totals, _tally(config, config.designs, done, cp)):
            acc.merge(part)
        done = cp
        for d, acc in zip(config.designs, totals):
            rep = finalize(acc, design=d.name, model=config.model_label, seed=config.seed)
            top_two_se = None
            if rep.top_two_final is not None:
                top_two_se = float(np.sqrt(rep.top_two_final * (1 - rep.top_two_final) / cp))
            trace[d.name].append(
                Checkpoint(cp, rep.best_team_win_prob, float(rep.win_prob_best_p_se[0]), rep.top_two_final, top_two_se)
            )
    return trace
