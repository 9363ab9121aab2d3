from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from handball_sim.strength import (
    BASELINE,
    ParameterError,
    StrengthParams,
    deterministic_matrix,
    probability_matrix,
    uniform_matrix,
    validate_matrix,
    win_probability,
)

ranks = st.integers(min_value=1, max_value=24)
params = st.builds(
    StrengthParams,
    alpha=st.floats(min_value=0, max_value=50, allow_nan=False),
    beta=st.floats(min_value=0, max_value=200, allow_nan=False),
)


def exact(i, j, alpha=4, beta=24):
    ratio = Fraction(i + beta, j + beta) ** alpha
    return float(1 / (1 + ratio))


@pytest.mark.parametrize("i, j, expected", [
    (1, 1, 0.5),
    (1, 24, 0.931458),
    (13, 24, 0.739068),
    (2, 1, 0.460860),
])
def test_reference_probabilities(i, j, expected):
    assert win_probability(i, j) == pytest.approx(expected, abs=1e-6)
    assert exact(i, j) == pytest.approx(expected, abs=1e-6)


def test_matrix_matches_exact_rationals():
    matrix = probability_matrix(BASELINE)
    for i in range(1, 25):
        for j in range(1, 25):
            assert matrix[i - 1, j - 1] == pytest.approx(exact(i, j), abs=1e-15)


def test_alpha_zero_is_a_coin():
    assert np.all(probability_matrix(StrengthParams(0, 24)) == 0.5)
    assert np.array_equal(probability_matrix(StrengthParams(0, 7)), uniform_matrix())


def test_baseline_curve_shape():
    m = probability_matrix()
    adjacent = np.array([m[i, i + 1] for i in range(23)])
    assert adjacent.max() <= 0.54
    assert np.all(m[0, 19:] > 0.9)


@given(ranks, ranks, params)
def test_complementarity(i, j, p):
    assert win_probability(i, j, p) + win_probability(j, i, p) == pytest.approx(1.0, abs=1e-12)


@given(ranks, ranks, ranks, params)
def test_monotone_in_opponent_rank(i, j, k, p):
    j, k = sorted((j, k))
    assert win_probability(i, j, p) <= win_probability(i, k, p) + 1e-15


@given(params)
def test_matrix_is_valid(p):
    m = probability_matrix(p)
    validate_matrix(m)
    assert np.all(np.diag(m) == 0.5)
    assert not m.flags.writeable


def test_extreme_alpha_does_not_overflow():
    assert win_probability(24, 1, StrengthParams(1e6, 0)) == 0.0
    assert win_probability(1, 24, StrengthParams(1e6, 0)) == 1.0


@pytest.mark.parametrize("kwargs", [dict(alpha=-1), dict(beta=-0.5), dict(alpha=float("nan")),
                                    dict(beta=float("inf")), dict(alpha="4")])
def test_bad_params(kwargs):
    with pytest.raises(ParameterError):
        StrengthParams(**kwargs)


@pytest.mark.parametrize("i, j", [(0, 1), (1, 25), (1.5, 2), (True, 2)])
def test_bad_ranks(i, j):
    with pytest.raises(ParameterError):
        win_probability(i, j)


def test_degenerate_matrices():
    d = deterministic_matrix()
    assert d[0, 23] == 1 and d[23, 0] == 0
    validate_matrix(d)
    with pytest.raises(ParameterError):
        validate_matrix(np.full((3, 3), 0.7))
    with pytest.raises(ParameterError):
        validate_matrix(np.ones((2, 3)))
