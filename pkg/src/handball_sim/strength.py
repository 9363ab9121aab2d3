"""Pairwise win probabilities from pre-tournament ranks.

Team ``i`` beats team ``j`` with probability ``1 / (1 + ((i + beta) / (j + beta)) ** alpha)``.
Ranks double as team identifiers, 1 being the strongest team.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

N_TEAMS = 24


class ParameterError(ValueError):
    """Invalid rank or strength parameter."""


@dataclass(frozen=True)
class StrengthParams:
    alpha: float = 4.0
    beta: float = 24.0

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ParameterError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value) or value < 0:
                raise ParameterError(f"{name} must be finite and nonnegative, got {value!r}")

    @property
    def label(self) -> str:
        return f"alpha={self.alpha:g},beta={self.beta:g}"


BASELINE = StrengthParams(4.0, 24.0)


def _check_rank(rank: int, n_teams: int) -> None:
    if isinstance(rank, bool) or not isinstance(rank, (int, np.integer)):
        raise ParameterError(f"rank must be an integer, got {rank!r}")
    if not 1 <= rank <= n_teams:
        raise ParameterError(f"rank must lie in [1, {n_teams}], got {rank}")


def win_probability(i: int, j: int, params: StrengthParams = BASELINE, n_teams: int = N_TEAMS) -> float:
    """Probability that the team ranked ``i`` defeats the team ranked ``j``.

    The ratio is formed before exponentiation so that large ``alpha`` cannot
    overflow; an overflowing power simply drives the probability to zero.
    """
    _check_rank(i, n_teams)
    _check_rank(j, n_teams)
    if i == j:
        return 0.5
    ratio = (i + params.beta) / (j + params.beta)
    try:
        power = ratio**params.alpha
    except OverflowError:
        return 0.0
    return 1.0 / (1.0 + power)


def probability_matrix(params: StrengthParams = BASELINE, n_teams: int = N_TEAMS) -> np.ndarray:
    """``n_teams x n_teams`` matrix whose entry ``[i-1, j-1]`` is ``win_probability(i, j)``."""
    ranks = np.arange(1, n_teams + 1, dtype=np.float64)
    with np.errstate(over="ignore"):
        ratio = (ranks[:, None] + params.beta) / (ranks[None, :] + params.beta)
        matrix = 1.0 / (1.0 + ratio**params.alpha)
    np.fill_diagonal(matrix, 0.5)
    matrix.setflags(write=False)
    return matrix


def uniform_matrix(n_teams: int = N_TEAMS) -> np.ndarray:
    """Every match is a fair coin."""
    matrix = np.full((n_teams, n_teams), 0.5)
    matrix.setflags(write=False)
    return matrix


def deterministic_matrix(n_teams: int = N_TEAMS) -> np.ndarray:
    """The better-ranked team always wins."""
    matrix = np.triu(np.ones((n_teams, n_teams)), k=1)
    np.fill_diagonal(matrix, 0.5)
    matrix.setflags(write=False)
    return matrix


def validate_matrix(matrix: np.ndarray) -> np.ndarray:
    """Check a user-supplied win-probability matrix and return it as float64."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ParameterError(f"probability matrix must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)) or matrix.min() < 0.0 or matrix.max() > 1.0:
        raise ParameterError("probability matrix entries must lie in [0, 1]")
    if not np.allclose(matrix + matrix.T, 1.0, atol=1e-9):
        raise ParameterError("probability matrix must satisfy M[i, j] + M[j, i] = 1")
    return matrix
