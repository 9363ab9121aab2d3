"""Allocation of teams to preliminary-round groups."""

from __future__ import annotations

from dataclasses import dataclass

from handball_sim.formats import FormatSpec, SeedingPolicy
from handball_sim.rng import CounterStream


@dataclass(frozen=True)
class GroupAssignment:
    groups: tuple[tuple[int, ...], ...]

    @property
    def group_count(self) -> int:
        return len(self.groups)

    @property
    def group_size(self) -> int:
        return len(self.groups[0])

    def group_of(self, team: int) -> int:
        for g, members in enumerate(self.groups):
            if team in members:
                return g
        raise KeyError(team)


def pots(fmt: FormatSpec) -> list[list[int]]:
    """Pot ``m`` holds ranks ``m*k + 1 .. (m+1)*k`` for ``k`` groups."""
    k = fmt.prelim.group_count
    return [list(range(m * k + 1, (m + 1) * k + 1)) for m in range(fmt.prelim.group_size)]


def identity_draw(fmt: FormatSpec) -> GroupAssignment:
    """Deal ranks round-robin into the groups: group ``g`` gets ``g+1, g+1+k, ...``."""
    k = fmt.prelim.group_count
    return GroupAssignment(tuple(tuple(pot[g] for pot in pots(fmt)) for g in range(k)))


def draw_groups(policy: SeedingPolicy | None, fmt: FormatSpec, rng: CounterStream) -> GroupAssignment:
    """Draw the preliminary groups.

    Seeded: every pot is spread over the groups by an independent uniform
    permutation, so each group gets one team per pot. Random: a uniform
    shuffle of all teams is cut into consecutive groups. A single-group
    format consumes no randomness.
    """
    k, size = fmt.prelim.group_count, fmt.prelim.group_size
    if k == 1:
        return GroupAssignment((tuple(range(1, fmt.n_teams + 1)),))
    if policy is SeedingPolicy.SEEDED:
        groups: list[list[int]] = [[] for _ in range(k)]
        for pot in pots(fmt):
            order = list(range(k))
            rng.shuffle(order)
            for team, g in zip(pot, order):
                groups[g].append(team)
        return GroupAssignment(tuple(tuple(g) for g in groups))
    if policy is SeedingPolicy.RANDOM:
        teams = list(range(1, fmt.n_teams + 1))
        rng.shuffle(teams)
        return GroupAssignment(tuple(tuple(teams[g * size:(g + 1) * size]) for g in range(k)))
    raise ValueError(f"unknown seeding policy {policy!r}")
