"""Lowering of a :class:`Design` into flat integer tables for the compiled kernel."""

from __future__ import annotations

from dataclasses import dataclass

from handball_sim.formats import Design, FormatSpec, SeedingPolicy, parse_standing
from handball_sim.rng import TAG_DRAW, TAG_TIEBREAK

MAX_TEAMS = 32
MAX_GROUPS = 8
MAX_MATCHES = 32

POLICY_SEEDED, POLICY_RANDOM, POLICY_NONE = 0, 1, 2
REF_STANDING, REF_WINNER, REF_LOSER = 0, 1, 2


@dataclass(frozen=True)
class Program:
    n_teams: int
    group_count: int
    group_size: int
    main_count: int
    main_size: int
    carry_over: int
    policy: int
    main_slots: tuple[tuple[tuple[int, int], ...], ...]   # (prelim group, position-1)
    knockout: tuple[tuple[tuple[int, int, int], tuple[int, int, int]], ...]
    semifinal: tuple[int, ...]
    placements: tuple[tuple[int, int, int], ...]
    final_index: int
    draw_tag: int
    tiebreak_tag: int


def compile_design(design: Design) -> Program:
    fmt: FormatSpec = design.format
    if fmt.n_teams > MAX_TEAMS or fmt.prelim.group_count > MAX_GROUPS or len(fmt.main_groups) > MAX_GROUPS:
        raise ValueError(f"{fmt.id} exceeds the compiled kernel limits")
    if len(fmt.knockout) > MAX_MATCHES:
        raise ValueError(f"{fmt.id} has more than {MAX_MATCHES} knockout matches")
    group_index = {label: i for i, label in enumerate(fmt.group_labels)}
    match_index = {m.label: i for i, m in enumerate(fmt.knockout)}

    def ref(r: str) -> tuple[int, int, int]:
        if r.startswith("W/"):
            return (REF_WINNER, match_index[r[2:]], 0)
        if r.startswith("L/"):
            return (REF_LOSER, match_index[r[2:]], 0)
        label, pos = parse_standing(r)
        return (REF_STANDING, group_index[label], pos - 1)

    if not fmt.seeding_matters:
        policy = POLICY_NONE
    elif design.policy is SeedingPolicy.SEEDED:
        policy = POLICY_SEEDED
    else:
        policy = POLICY_RANDOM

    slots = tuple(
        tuple((group_index[label], pos - 1) for label, pos in map(parse_standing, g.slots))
        for g in fmt.main_groups
    )
    return Program(
        n_teams=fmt.n_teams,
        group_count=fmt.prelim.group_count,
        group_size=fmt.prelim.group_size,
        main_count=len(fmt.main_groups),
        main_size=fmt.main_group_size,
        carry_over=int(fmt.carry_over),
        policy=policy,
        main_slots=slots,
        knockout=tuple((ref(m.home), ref(m.away)) for m in fmt.knockout),
        semifinal=tuple(int(m.label.startswith("SF")) for m in fmt.knockout),
        placements=tuple(ref(r) for r in fmt.placements),
        final_index=match_index.get("F", -1),
        draw_tag=TAG_DRAW + design.code,
        tiebreak_tag=TAG_TIEBREAK + design.code,
    )
