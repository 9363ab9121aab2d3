"""Success measures of a tournament design, estimated from simulated runs.

All tallies are integer counts (or exact float weights for analytic
enumeration), so merging accumulators is associative and commutative and
nothing is divided until :func:`finalize`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from handball_sim.engine import TournamentResult

PLACES = 4


class EmptySampleError(ValueError):
    pass


class ComparabilityError(ValueError):
    pass


@dataclass
class Accumulator:
    """Running tallies for one design.

    ``final_pairs[a-1, b-1]`` (``a < b``) counts finals between teams ``a`` and
    ``b``; ``semifinal_pairs`` does the same for semifinal pairings.
    """

    n_teams: int = 24
    weighted: bool = False
    runs: Any = 0
    matches: Any = 0
    place_counts: np.ndarray = field(init=False)
    final_pairs: np.ndarray = field(init=False)
    semifinalists: np.ndarray = field(init=False)
    semifinal_pairs: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        dtype = np.float64 if self.weighted else np.int64
        n = self.n_teams
        self.place_counts = np.zeros((n, PLACES), dtype=dtype)
        self.final_pairs = np.zeros((n, n), dtype=dtype)
        self.semifinalists = np.zeros(n, dtype=dtype)
        self.semifinal_pairs = np.zeros((n, n), dtype=dtype)

    def add(self, result: TournamentResult, weight: int | float = 1, matches: int = 0) -> None:
        if not self.weighted and weight != 1:
            raise ValueError("weights need a weighted accumulator")
        self.runs += weight
        self.matches += weight * matches
        for place, team in enumerate(result.placements):
            self.place_counts[team - 1, place] += weight
        if result.finalists is not None:
            a, b = result.finalists
            self.final_pairs[a - 1, b - 1] += weight
        for a, b in result.semifinals:
            self.semifinalists[[a - 1, b - 1]] += weight
            self.semifinal_pairs[a - 1, b - 1] += weight

    def merge(self, other: Accumulator) -> Accumulator:
        if other.n_teams != self.n_teams:
            raise ComparabilityError("cannot merge accumulators of different team counts")
        self.runs += other.runs
        self.matches += other.matches
        self.place_counts += other.place_counts
        self.final_pairs += other.final_pairs
        self.semifinalists += other.semifinalists
        self.semifinal_pairs += other.semifinal_pairs
        return self

    @classmethod
    def from_arrays(cls, runs: int, matches: int, place_counts, final_pairs, semifinalists, semifinal_pairs) -> Accumulator:
        acc = cls(n_teams=len(semifinalists))
        acc.runs, acc.matches = int(runs), int(matches)
        acc.place_counts[:] = place_counts
        acc.final_pairs[:] = final_pairs
        acc.semifinalists[:] = semifinalists
        acc.semifinal_pairs[:] = semifinal_pairs
        return acc


def accumulate(acc: Accumulator, result: TournamentResult) -> Accumulator:
    acc.add(result)
    return acc


def _prob_se(p: np.ndarray | float, n: float) -> np.ndarray | float:
    return np.sqrt(np.clip(p * (1.0 - p), 0.0, None) / n)


def _mean_se(values: np.ndarray, weights: np.ndarray, total: float) -> tuple[float, float]:
    mean = float((values * weights).sum() / total)
    second = float((values**2 * weights).sum() / total)
    return mean, float(np.sqrt(max(second - mean**2, 0.0) / total))


@dataclass
class MetricsReport:
    design: str
    model: str
    runs: int
    seed: int | None
    win_prob_best_p: np.ndarray
    win_prob_best_p_se: np.ndarray
    final_reach_prob_best_p: np.ndarray | None
    final_reach_prob_best_p_se: np.ndarray | None
    avg_rank_place: np.ndarray
    avg_rank_place_se: np.ndarray
    placement_prob: np.ndarray
    final_quality: float | None
    final_quality_se: float | None
    final_balance: float | None
    final_balance_se: float | None
    top_two_final: float | None
    semifinalist_prob: np.ndarray | None
    semifinal_pair_prob: np.ndarray | None
    mean_matches: float

    @property
    def n_teams(self) -> int:
        return len(self.win_prob_best_p)

    @property
    def best_team_win_prob(self) -> float:
        return float(self.win_prob_best_p[0])

    def semifinal_meeting_prob(self, a: int, b: int) -> float:
        if self.semifinal_pair_prob is None:
            return 0.0
        a, b = min(a, b), max(a, b)
        return float(self.semifinal_pair_prob[a - 1, b - 1])

    def worst_semifinalist(self) -> int | None:
        """Weakest rank that reached a semifinal in any run."""
        if self.semifinalist_prob is None:
            return None
        reached = np.nonzero(self.semifinalist_prob)[0]
        return int(reached[-1]) + 1 if len(reached) else None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        for key, value in self.__dict__.items():
            out[key] = value.tolist() if isinstance(value, np.ndarray) else value
        return out


def finalize(acc: Accumulator, design: str = "", model: str = "", seed: int | None = None) -> MetricsReport:
    """Turn tallies into probabilities and expectations."""
    n_runs = acc.runs
    if n_runs <= 0:
        raise EmptySampleError("cannot summarise an empty sample")
    n = acc.n_teams
    ranks = np.arange(1, n + 1, dtype=np.float64)
    place = acc.place_counts.astype(np.float64)

    win = np.cumsum(place[:, 0]) / n_runs
    avg, avg_se = np.empty(PLACES), np.empty(PLACES)
    for k in range(PLACES):
        avg[k], avg_se[k] = _mean_se(ranks, place[:, k], n_runs)

    finals = acc.final_pairs.astype(np.float64)
    final_total = finals.sum()
    if final_total > 0:
        lo, hi = np.meshgrid(ranks, ranks, indexing="ij")
        reach = np.cumsum(finals.sum(axis=1)) / n_runs
        reach_se = _prob_se(reach, n_runs)
        quality, quality_se = _mean_se(lo + hi, finals, final_total)
        balance, balance_se = _mean_se(np.abs(hi - lo), finals, final_total)
        top_two = float(finals[0, 1] / n_runs) if n > 1 else 0.0
    else:
        reach = reach_se = None
        quality = quality_se = balance = balance_se = top_two = None

    if acc.semifinalists.sum() > 0:
        sf = acc.semifinalists / n_runs
        sf_pairs = acc.semifinal_pairs / n_runs
    else:
        sf = sf_pairs = None

    return MetricsReport(
        design=design,
        model=model,
        runs=int(n_runs) if not acc.weighted else n_runs,
        seed=seed,
        win_prob_best_p=win,
        win_prob_best_p_se=_prob_se(win, n_runs),
        final_reach_prob_best_p=reach,
        final_reach_prob_best_p_se=reach_se,
        avg_rank_place=avg,
        avg_rank_place_se=avg_se,
        placement_prob=place / n_runs,
        final_quality=quality,
        final_quality_se=quality_se,
        final_balance=balance,
        final_balance_se=balance_se,
        top_two_final=top_two,
        semifinalist_prob=sf,
        semifinal_pair_prob=sf_pairs,
        mean_matches=float(acc.matches / n_runs),
    )


def diff_vs_reference(report: MetricsReport, reference: MetricsReport, kind: str = "win") -> np.ndarray:
    """Element-wise difference against a reference design.

    ``kind="win"`` compares the best-p win probabilities (against RR, say);
    ``kind="placement"`` compares the team-by-place probability table
    (against KO, say).
    """
    if (report.model, report.runs, report.n_teams) != (reference.model, reference.runs, reference.n_teams):
        raise ComparabilityError(
            f"{report.design} ({report.model}, N={report.runs}) is not comparable with "
            f"{reference.design} ({reference.model}, N={reference.runs})"
        )
    if kind == "win":
        return report.win_prob_best_p - reference.win_prob_best_p
    if kind == "placement":
        return report.placement_prob - reference.placement_prob
    if kind == "final":
        if report.final_reach_prob_best_p is None or reference.final_reach_prob_best_p is None:
            raise ComparabilityError("final-reach probabilities need a design with a final")
        return report.final_reach_prob_best_p - reference.final_reach_prob_best_p
    raise ValueError(f"unknown difference kind {kind!r}")
