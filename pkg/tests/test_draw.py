from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare

from handball_sim.draw import GroupAssignment, draw_groups, identity_draw, pots
from handball_sim.formats import FORMATS, G46, KO, RR, TOURNAMENT_FORMATS, SeedingPolicy
from handball_sim.rng import TAG_DRAW, CounterStream

N_DRAWS = 100_000


def draws(policy, fmt, n, seed=31):
    code = 2 * fmt.code + (policy is SeedingPolicy.RANDOM)
    return [draw_groups(policy, fmt, CounterStream.for_run(seed, r, TAG_DRAW + code)) for r in range(n)]


def membership(assignments, fmt):
    counts = np.zeros((fmt.n_teams, fmt.prelim.group_count), dtype=np.int64)
    for a in assignments:
        for g, members in enumerate(a.groups):
            for t in members:
                counts[t - 1, g] += 1
    return counts


@pytest.fixture(scope="module")
def random_ko():
    return draws(SeedingPolicy.RANDOM, KO, N_DRAWS)


@pytest.fixture(scope="module")
def seeded_ko():
    return draws(SeedingPolicy.SEEDED, KO, N_DRAWS)


def test_pots():
    assert pots(KO) == [[1, 2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12], [13, 14, 15, 16],
                        [17, 18, 19, 20], [21, 22, 23, 24]]
    assert pots(G46)[0] == [1, 2, 3, 4, 5, 6] and len(pots(G46)) == 4


def test_identity_draw():
    a = identity_draw(KO)
    assert a.groups[0] == (1, 5, 9, 13, 17, 21)
    assert a.groups[3] == (4, 8, 12, 16, 20, 24)
    assert identity_draw(G46).groups[5] == (6, 12, 18, 24)


@pytest.mark.parametrize("fmt", TOURNAMENT_FORMATS, ids=lambda f: f.id)
@given(seed=st.integers(0, 2**64 - 1), run=st.integers(0, 10**6))
def test_seeded_draw_one_team_per_pot(fmt, seed, run):
    a = draw_groups(SeedingPolicy.SEEDED, fmt, CounterStream.for_run(seed, run, TAG_DRAW))
    assert sorted(t for g in a.groups for t in g) == list(range(1, 25))
    for members in a.groups:
        assert [(t - 1) // fmt.prelim.group_count for t in members] == list(range(fmt.prelim.group_size))


@pytest.mark.parametrize("fmt", TOURNAMENT_FORMATS, ids=lambda f: f.id)
@given(seed=st.integers(0, 2**64 - 1))
def test_random_draw_partitions(fmt, seed):
    a = draw_groups(SeedingPolicy.RANDOM, fmt, CounterStream(seed))
    assert sorted(t for g in a.groups for t in g) == list(range(1, 25))
    assert a.group_count == fmt.prelim.group_count and a.group_size == fmt.prelim.group_size


def test_single_group_consumes_nothing():
    rng = CounterStream(1)
    a = draw_groups(None, RR, rng)
    assert a.groups == (tuple(range(1, 25)),) and rng.counter == 0


def test_top_two_share_random_group(random_ko):
    together = sum(a.group_of(1) == a.group_of(2) for a in random_ko) / N_DRAWS
    assert together == pytest.approx(5 / 23, abs=0.01)


def test_top_two_never_share_seeded_group(seeded_ko):
    assert not any(a.group_of(1) == a.group_of(2) for a in seeded_ko)


def test_random_membership_uniform(random_ko):
    counts = membership(random_ko, KO)
    for row in counts:
        assert chisquare(row).pvalue > 0.001
    # pair co-membership is uniform too
    pair = np.zeros(276)
    for a in random_ko[:20_000]:
        for g in a.groups:
            for i, j in combinations(sorted(g), 2):
                pair[(i - 1) * (48 - i) // 2 + (j - i - 1)] += 1
    assert chisquare(pair).pvalue > 0.001


def test_seeded_membership_uniform(seeded_ko):
    counts = membership(seeded_ko, KO)
    for row in counts:
        assert chisquare(row).pvalue > 0.001


def test_group_of_unknown_team():
    with pytest.raises(KeyError):
        GroupAssignment(((1, 2), (3, 4))).group_of(9)


def test_unknown_policy():
    with pytest.raises(ValueError):
        draw_groups("lottery", FORMATS["ko"], CounterStream(0))
