"""Playing out one tournament of a given design.

This is the reference interpreter of :class:`~handball_sim.formats.FormatSpec`
and also the pure-Python simulation backend.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from handball_sim.draw import GroupAssignment, identity_draw
from handball_sim.formats import FormatSpec, StructuralError, parse_standing
from handball_sim.outcomes import OutcomeTables
from handball_sim.rng import CounterStream

POINTS_PER_WIN = 2


@dataclass(frozen=True)
class MatchRecord:
    stage: str
    label: str
    home: int
    away: int
    winner: int
    meeting: int


@dataclass
class MeetingLedger:
    """Counts meetings per unordered pair and logs every match played."""

    counts: Counter = field(default_factory=Counter)
    records: list[MatchRecord] = field(default_factory=list)

    def play(self, a: int, b: int, outcomes: OutcomeTables, stage: str, label: str = "") -> int:
        key = (a, b) if a < b else (b, a)
        meeting = self.counts[key]
        if meeting >= 2:
            raise StructuralError(f"teams {a} and {b} would meet a third time in {stage} {label}".rstrip())
        winner = outcomes.winner(a, b, meeting)
        self.counts[key] = meeting + 1
        self.records.append(MatchRecord(stage, label, a, b, winner, meeting))
        return winner

    def matches_per_team(self) -> Counter:
        played: Counter = Counter()
        for r in self.records:
            played[r.home] += 1
            played[r.away] += 1
        return played


@dataclass(frozen=True)
class GroupStanding:
    label: str
    order: tuple[int, ...]
    points: tuple[int, ...]

    def team_at(self, position: int) -> int:
        return self.order[position - 1]

    def points_of(self, team: int) -> int:
        return self.points[self.order.index(team)]


@dataclass(frozen=True)
class TournamentResult:
    champion: int
    runner_up: int
    third: int
    fourth: int
    finalists: tuple[int, int] | None = None
    semifinals: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        top = self.placements
        if len(set(top)) != 4:
            raise StructuralError(f"placements are not four distinct teams: {top}")
        if self.finalists is not None and set(self.finalists) != {self.champion, self.runner_up}:
            raise StructuralError(f"finalists {self.finalists} disagree with the top two {top[:2]}")

    @property
    def placements(self) -> tuple[int, int, int, int]:
        return (self.champion, self.runner_up, self.third, self.fourth)


def play_group(
    members: Sequence[int],
    carried: Iterable[tuple[tuple[int, int], int]] = (),
    outcomes: OutcomeTables | None = None,
    *,
    rng: CounterStream | None = None,
    ledger: MeetingLedger | None = None,
    label: str = "",
    stage: str = "group",
) -> GroupStanding:
    """Single round robin among ``members``; carried results are counted, not replayed.

    Teams are ordered by points with a uniformly random order inside every
    block of equal points. One tie-break key is drawn from ``rng`` per member
    in member order, whether or not a tie occurs.
    """
    members = tuple(members)
    ledger = ledger if ledger is not None else MeetingLedger()
    rng = rng if rng is not None else CounterStream(0)
    carried_winner: dict[frozenset, int] = {}
    for (a, b), winner in carried:
        if a not in members or b not in members or winner not in (a, b):
            raise StructuralError(f"carried result {a}-{b} does not belong to group {label or members}")
        carried_winner[frozenset((a, b))] = winner

    points = dict.fromkeys(members, 0)
    for a, b in combinations(members, 2):
        winner = carried_winner.get(frozenset((a, b)))
        if winner is None:
            if outcomes is None:
                raise StructuralError(f"no outcome available for {a}-{b}")
            winner = ledger.play(a, b, outcomes, stage, label)
        points[winner] += POINTS_PER_WIN

    keys = {team: rng.next_u64() for team in members}
    order = sorted(members, key=lambda t: (-points[t], keys[t], t))
    return GroupStanding(label, tuple(order), tuple(points[t] for t in order))


def play_tournament(
    fmt: FormatSpec,
    assignment: GroupAssignment,
    outcomes: OutcomeTables,
    rng: CounterStream | None = None,
    ledger: MeetingLedger | None = None,
) -> TournamentResult:
    """Run every stage of ``fmt`` and report the top four.

    A pair meeting again in the knockout stage uses its second-meeting
    outcome; a third meeting raises :class:`StructuralError`.
    """
    pre = fmt.prelim
    if assignment.group_count != pre.group_count or any(len(g) != pre.group_size for g in assignment.groups):
        raise StructuralError(
            f"{fmt.id}: draw has {assignment.group_count} groups, expected {pre.group_count} of {pre.group_size}"
        )
    rng = rng if rng is not None else CounterStream(0)
    ledger = ledger if ledger is not None else MeetingLedger()
    standings: dict[str, GroupStanding] = {}
    prelim_winner: dict[frozenset, int] = {}

    for label, members in zip(fmt.prelim_labels, assignment.groups):
        start = len(ledger.records)
        standings[label] = play_group(members, (), outcomes, rng=rng, ledger=ledger, label=label, stage="prelim")
        for r in ledger.records[start:]:
            prelim_winner[frozenset((r.home, r.away))] = r.winner

    def standing(ref: str) -> int:
        label, pos = parse_standing(ref)
        return standings[label].team_at(pos)

    for group in fmt.main_groups:
        members = [standing(slot) for slot in group.slots]
        carried = []
        for a_ref, b_ref in fmt.main_carried_pairs(group):
            a, b = standing(a_ref), standing(b_ref)
            carried.append(((a, b), prelim_winner[frozenset((a, b))]))
        standings[group.label] = play_group(
            members, carried, outcomes, rng=rng, ledger=ledger, label=group.label, stage="main"
        )

    decided: dict[str, int] = {}

    def resolve(ref: str) -> int:
        if ref[:2] in ("W/", "L/"):
            return decided[ref]
        return standing(ref)

    semifinals = []
    for match in fmt.knockout:
        home, away = resolve(match.home), resolve(match.away)
        winner = ledger.play(home, away, outcomes, "knockout", match.label)
        decided["W/" + match.label] = winner
        decided["L/" + match.label] = away if winner == home else home
        if match.label.startswith("SF"):
            semifinals.append((min(home, away), max(home, away)))

    places = tuple(resolve(ref) for ref in fmt.placements)
    finalists = None
    if fmt.has_final:
        a, b = decided["W/F"], decided["L/F"]
        finalists = (min(a, b), max(a, b))
    return TournamentResult(*places, finalists=finalists, semifinals=tuple(semifinals))


def match_count_distribution(fmt: FormatSpec, outcomes: OutcomeTables | None = None,
                             assignment: GroupAssignment | None = None) -> dict[int, int]:
    """Map from matches played to number of teams.

    The distribution does not depend on results or on the draw; by default it
    is read off a tournament with identity draw and deterministic outcomes.
    """
    ledger = MeetingLedger()
    play_tournament(
        fmt,
        assignment or identity_draw(fmt),
        outcomes or OutcomeTables.deterministic(fmt.n_teams),
        ledger=ledger,
    )
    per_team = ledger.matches_per_team()
    return dict(sorted(Counter(per_team[t] for t in range(1, fmt.n_teams + 1)).items()))
