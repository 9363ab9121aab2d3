"""Pre-drawn match outcomes shared by every design within one run."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from handball_sim.rng import _INV_2_53, GOLDEN, TAG_OUTCOMES, mix64_array, stream_key, stream_keys, unit_block


@dataclass(frozen=True)
class OutcomeTables:
    """Win indicators for the first and second meeting of every pair.

    ``first[i-1, j-1]`` is true iff team ``i`` beats team ``j`` the first time
    they meet. Both tables are antisymmetric off the diagonal.
    """

    first: np.ndarray
    second: np.ndarray

    @property
    def n_teams(self) -> int:
        return self.first.shape[0]

    def winner(self, a: int, b: int, meeting: int) -> int:
        table = self.first if meeting == 0 else self.second
        return a if table[a - 1, b - 1] else b

    @classmethod
    def from_upper(cls, first_upper: np.ndarray, second_upper: np.ndarray, n_teams: int) -> OutcomeTables:
        """Build from per-pair flags (row-major over ``i < j``, true when ``i`` wins)."""
        return cls(_expand(first_upper, n_teams), _expand(second_upper, n_teams))

    @classmethod
    def deterministic(cls, n_teams: int = 24) -> OutcomeTables:
        """Better-ranked team wins every meeting."""
        table = np.triu(np.ones((n_teams, n_teams), dtype=bool), k=1)
        return cls(table, table.copy())


def _expand(upper: np.ndarray, n_teams: int) -> np.ndarray:
    rows, cols = np.triu_indices(n_teams, k=1)
    table = np.zeros((n_teams, n_teams), dtype=bool)
    table[rows, cols] = upper
    table[cols, rows] = ~np.asarray(upper, dtype=bool)
    return table


def pair_count(n_teams: int) -> int:
    return n_teams * (n_teams - 1) // 2


def outcome_flags(matrix: np.ndarray, key: int) -> np.ndarray:
    """``(2, pairs)`` flags: draw ``t * pairs + p`` decides pair ``p`` in meeting ``t``."""
    n = matrix.shape[0]
    rows, cols = np.triu_indices(n, k=1)
    probs = matrix[rows, cols]
    draws = unit_block(key, 2 * len(probs)).reshape(2, len(probs))
    return draws < probs


def generate_outcomes(matrix: np.ndarray, master_seed: int, run_index: int) -> OutcomeTables:
    """Draw both outcome tables of one run, each pair independently Bernoulli.

    ``matrix`` is the full win-probability matrix; only its upper triangle is
    read. Draws are consumed row-major over ``i < j``, first table then second.
    """
    flags = outcome_flags(matrix, stream_key(master_seed, run_index, TAG_OUTCOMES))
    return OutcomeTables.from_upper(flags[0], flags[1], matrix.shape[0])


def win_counts(matrix: np.ndarray, master_seed: int, runs: int, chunk: int = 1_000) -> np.ndarray:
    """``(2, pairs)`` counts of runs in which the lower rank won each meeting.

    Vectorised over runs; gives the same flags as :func:`generate_outcomes`
    for runs ``0 .. runs-1``.
    """
    n = matrix.shape[0]
    rows, cols = np.triu_indices(n, k=1)
    probs = matrix[rows, cols]
    counters = np.arange(1, 2 * len(probs) + 1, dtype=np.uint64) * np.uint64(GOLDEN)
    total = np.zeros(2 * len(probs), dtype=np.int64)
    for start in range(0, runs, chunk):
        keys = stream_keys(master_seed, start, min(start + chunk, runs), TAG_OUTCOMES)
        with np.errstate(over="ignore"):
            raw = mix64_array(keys[:, None] + counters[None, :])
        units = (raw >> np.uint64(11)).astype(np.float64) * _INV_2_53
        total += (units < np.tile(probs, 2)).sum(axis=0)
    return total.reshape(2, len(probs))
