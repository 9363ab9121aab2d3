import numpy as np
import pytest

from handball_sim.outcomes import OutcomeTables, pair_count, win_counts
from handball_sim.strength import StrengthParams, probability_matrix, uniform_matrix

SEED = 2024


@pytest.fixture(scope="module")
def fair_counts_1e5():
    return win_counts(uniform_matrix(), SEED, 100_000)


def test_fair_coin_pooled(fair_counts_1e5):
    assert fair_counts_1e5.sum() / fair_counts_1e5.size / 100_000 == pytest.approx(0.5, abs=0.005)


@pytest.mark.slow
def test_fair_coin_every_entry():
    # 552 entries each within 0.005 of 1/2; at 1e5 runs that band is only 3.2 standard
    # errors per entry, so the per-entry check uses 1e6 runs (10 standard errors)
    counts = win_counts(uniform_matrix(), SEED, 1_000_000)
    assert np.abs(counts / 1_000_000 - 0.5).max() <= 0.005


def test_best_versus_worst_first_meeting():
    counts = win_counts(probability_matrix(), SEED, 100_000)
    # pair (1, 24) is the 23rd pair of the row-major upper triangle
    assert counts[0, 22] / 100_000 == pytest.approx(0.9315, abs=0.005)


def test_every_pair_within_five_standard_errors():
    m = probability_matrix(StrengthParams(4, 24))
    n = 100_000
    freq = win_counts(m, SEED + 1, n) / n
    p = m[np.triu_indices(24, k=1)]
    z = np.abs(freq - p) / np.sqrt(p * (1 - p) / n)
    assert z.max() < 5


def test_meetings_are_independent():
    n = 100_000
    counts = win_counts(uniform_matrix(), SEED + 2, n)
    # both meetings fair and not mirrored: the two tables differ on about half the pairs
    assert abs(counts[0].mean() - counts[1].mean()) / n < 0.005


def test_deterministic_tables():
    t = OutcomeTables.deterministic(6)
    assert t.winner(2, 5, 0) == 2 and t.winner(5, 2, 1) == 2
    assert pair_count(24) == 276
