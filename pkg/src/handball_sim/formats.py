"""Declarative tournament designs.

A design is pure data: a preliminary round of equal-size groups, an optional
main round whose groups are listed as preliminary standing slots (``"A1"``,
``"B3"`` ...), and a knockout bracket whose sides are references of the form

* ``"X1"``   final position 1 of group X (preliminary or main round),
* ``"W/QF1"`` winner of the match labelled QF1,
* ``"L/SF2"`` loser of the match labelled SF2.

Results between co-qualifiers from the same preliminary group are carried
into the main round when ``carry_over`` is set.
"""

from __future__ import annotations

import json
import string
from collections import Counter
from dataclasses import asdict, dataclass, field
from enum import Enum
from itertools import combinations
from pathlib import Path


class StructuralError(RuntimeError):
    """A design is miswired, or a pair of teams would meet a third time."""

    def __init__(self, message: str, run_index: int | None = None):
        if run_index is not None:
            message = f"run {run_index}: {message}"
        super().__init__(message)
        self.run_index = run_index


class SeedingPolicy(str, Enum):
    SEEDED = "seeded"
    RANDOM = "random"

    @property
    def short(self) -> str:
        return "S" if self is SeedingPolicy.SEEDED else "R"


@dataclass(frozen=True)
class GroupStage:
    group_count: int
    group_size: int
    qualifiers: int


@dataclass(frozen=True)
class MainGroup:
    label: str
    slots: tuple[str, ...]


@dataclass(frozen=True)
class Match:
    label: str
    home: str
    away: str


@dataclass(frozen=True)
class FormatSpec:
    id: str
    code: int
    prelim: GroupStage
    main_groups: tuple[MainGroup, ...] = ()
    main_qualifiers: int = 0
    carry_over: bool = True
    knockout: tuple[Match, ...] = ()
    placements: tuple[str, str, str, str] = ("W/F", "L/F", "W/BM", "L/BM")
    n_teams: int = 24
    prelim_labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.prelim_labels:
            labels = tuple(string.ascii_uppercase[: self.prelim.group_count])
            object.__setattr__(self, "prelim_labels", labels)
        validate(self)

    @property
    def name(self) -> str:
        return self.id.upper()

    @property
    def has_final(self) -> bool:
        return any(m.label == "F" for m in self.knockout)

    @property
    def third_place(self) -> bool:
        return any(m.label == "BM" for m in self.knockout)

    @property
    def group_labels(self) -> tuple[str, ...]:
        return self.prelim_labels + tuple(g.label for g in self.main_groups)

    @property
    def main_group_size(self) -> int:
        return len(self.main_groups[0].slots) if self.main_groups else 0

    @property
    def seeding_matters(self) -> bool:
        return self.prelim.group_count > 1

    def main_carried_pairs(self, group: MainGroup) -> list[tuple[str, str]]:
        """Slot pairs of ``group`` whose preliminary result is carried over."""
        if not self.carry_over:
            return []
        return [(a, b) for a, b in combinations(group.slots, 2) if a[0] == b[0]]

    def total_matches(self) -> int:
        s = self.prelim.group_size
        total = self.prelim.group_count * s * (s - 1) // 2
        for g in self.main_groups:
            m = len(g.slots)
            total += m * (m - 1) // 2 - len(self.main_carried_pairs(g))
        return total + len(self.knockout)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["main_groups"] = [{"label": g.label, "slots": list(g.slots)} for g in self.main_groups]
        data["knockout"] = [[m.label, m.home, m.away] for m in self.knockout]
        data["placements"] = list(self.placements)
        data["prelim_labels"] = list(self.prelim_labels)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> FormatSpec:
        return cls(
            id=data["id"],
            code=int(data["code"]),
            prelim=GroupStage(**data["prelim"]),
            main_groups=tuple(MainGroup(g["label"], tuple(g["slots"])) for g in data.get("main_groups", [])),
            main_qualifiers=int(data.get("main_qualifiers", 0)),
            carry_over=bool(data.get("carry_over", True)),
            knockout=tuple(Match(*m) for m in data.get("knockout", [])),
            placements=tuple(data["placements"]),
            n_teams=int(data.get("n_teams", 24)),
            prelim_labels=tuple(data.get("prelim_labels", ())),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> FormatSpec:
        return cls.from_dict(json.loads(text))


def parse_standing(ref: str) -> tuple[str, int]:
    """``"B3"`` -> ``("B", 3)``."""
    return ref[0], int(ref[1:])


def validate(fmt: FormatSpec) -> None:
    pre = fmt.prelim
    if pre.group_count * pre.group_size != fmt.n_teams:
        raise StructuralError(f"{fmt.id}: {pre.group_count} x {pre.group_size} groups do not hold {fmt.n_teams} teams")
    if not 1 <= pre.qualifiers <= pre.group_size:
        raise StructuralError(f"{fmt.id}: bad qualifier count {pre.qualifiers}")
    if len(fmt.prelim_labels) != pre.group_count or len(set(fmt.group_labels)) != len(fmt.group_labels):
        raise StructuralError(f"{fmt.id}: group labels must be distinct, one per group")
    sizes = {g.label: len(g.slots) for g in fmt.main_groups}
    prelim_sizes = {label: pre.group_size for label in fmt.prelim_labels}

    if fmt.main_groups:
        used = Counter(slot for g in fmt.main_groups for slot in g.slots)
        expected = {f"{label}{pos}" for label in fmt.prelim_labels for pos in range(1, pre.qualifiers + 1)}
        if set(used) != expected or any(c != 1 for c in used.values()):
            raise StructuralError(f"{fmt.id}: main round must take every preliminary qualifier exactly once")
        if len(set(sizes.values())) != 1:
            raise StructuralError(f"{fmt.id}: main round groups must have equal size")
        if not 1 <= fmt.main_qualifiers <= fmt.main_group_size:
            raise StructuralError(f"{fmt.id}: bad main round qualifier count {fmt.main_qualifiers}")
    qualifiers = {label: pre.qualifiers for label in fmt.prelim_labels}
    qualifiers.update({g.label: fmt.main_qualifiers for g in fmt.main_groups})
    final_sizes = {**prelim_sizes, **sizes}

    seen: set[str] = set()

    def check_ref(ref: str, where: str, in_bracket: bool) -> None:
        if ref[:2] in ("W/", "L/"):
            if ref[2:] not in seen:
                raise StructuralError(f"{fmt.id}: {where} refers to unplayed match {ref[2:]}")
            return
        label, pos = parse_standing(ref)
        if label not in final_sizes or not 1 <= pos <= final_sizes[label]:
            raise StructuralError(f"{fmt.id}: {where} refers to unknown standing {ref}")
        if in_bracket and fmt.main_groups and label in prelim_sizes:
            raise StructuralError(f"{fmt.id}: {where} skips the main round ({ref})")
        if in_bracket and pos > qualifiers[label]:
            raise StructuralError(f"{fmt.id}: {where} uses non-qualifier {ref}")

    for m in fmt.knockout:
        if m.label in seen:
            raise StructuralError(f"{fmt.id}: duplicate match label {m.label}")
        check_ref(m.home, m.label, True)
        check_ref(m.away, m.label, True)
        seen.add(m.label)
    for ref in fmt.placements:
        check_ref(ref, "placements", False)
    if fmt.knockout and not fmt.has_final:
        raise StructuralError(f"{fmt.id}: a knockout stage needs a match labelled F")


def _ko_bracket() -> tuple[Match, ...]:
    r16 = [("A1", "B4"), ("C3", "D2"), ("A3", "B2"), ("C1", "D4"),
           ("A4", "B1"), ("C2", "D3"), ("A2", "B3"), ("C4", "D1")]
    matches = [Match(f"R{i + 1}", h, a) for i, (h, a) in enumerate(r16)]
    matches += [Match(f"QF{i + 1}", f"W/R{2 * i + 1}", f"W/R{2 * i + 2}") for i in range(4)]
    matches += [Match("SF1", "W/QF1", "W/QF2"), Match("SF2", "W/QF3", "W/QF4")]
    return tuple(matches) + _medal_games()


def _medal_games() -> tuple[Match, ...]:
    return (Match("F", "W/SF1", "W/SF2"), Match("BM", "L/SF1", "L/SF2"))


RR = FormatSpec(
    id="rr",
    code=0,
    prelim=GroupStage(1, 24, 24),
    placements=("A1", "A2", "A3", "A4"),
)

KO = FormatSpec(
    id="ko",
    code=1,
    prelim=GroupStage(4, 6, 4),
    knockout=_ko_bracket(),
)

# X meets U and Y meets V in the semifinals; the labels themselves carry no meaning.
G64 = FormatSpec(
    id="g64",
    code=2,
    prelim=GroupStage(4, 6, 4),
    main_groups=(
        MainGroup("X", ("A1", "A3", "B2", "B4")),
        MainGroup("V", ("A2", "A4", "B1", "B3")),
        MainGroup("U", ("C1", "C3", "D2", "D4")),
        MainGroup("Y", ("C2", "C4", "D1", "D3")),
    ),
    main_qualifiers=1,
    knockout=(Match("SF1", "X1", "U1"), Match("SF2", "Y1", "V1")) + _medal_games(),
)

G66 = FormatSpec(
    id="g66",
    code=3,
    prelim=GroupStage(4, 6, 3),
    main_groups=(
        MainGroup("X", ("A1", "A2", "A3", "B1", "B2", "B3")),
        MainGroup("Y", ("C1", "C2", "C3", "D1", "D2", "D3")),
    ),
    main_qualifiers=2,
    knockout=(Match("SF1", "X1", "Y2"), Match("SF2", "X2", "Y1")) + _medal_games(),
)

G46 = FormatSpec(
    id="g46",
    code=4,
    prelim=GroupStage(6, 4, 2),
    main_groups=(
        MainGroup("X", ("A1", "A2", "B1", "B2", "C1", "C2")),
        MainGroup("Y", ("D1", "D2", "E1", "E2", "F1", "F2")),
    ),
    main_qualifiers=4,
    knockout=(
        Match("QF1", "X1", "Y4"),
        Match("QF2", "X3", "Y2"),
        Match("QF3", "X2", "Y3"),
        Match("QF4", "X4", "Y1"),
        Match("SF1", "W/QF1", "W/QF2"),
        Match("SF2", "W/QF3", "W/QF4"),
    ) + _medal_games(),
)

FORMATS: dict[str, FormatSpec] = {f.id: f for f in (RR, KO, G64, G66, G46)}
TOURNAMENT_FORMATS = (KO, G64, G66, G46)


def get_format(name: str) -> FormatSpec:
    try:
        return FORMATS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown format {name!r}; choose from {', '.join(FORMATS)}") from None


def load_format(path: str | Path) -> FormatSpec:
    return FormatSpec.from_json(Path(path).read_text())


@dataclass(frozen=True)
class Design:
    """A format together with its seeding policy (``None`` for a single group)."""

    format: FormatSpec
    policy: SeedingPolicy | None

    def __post_init__(self) -> None:
        if self.format.seeding_matters and self.policy is None:
            raise ValueError(f"{self.format.id} needs a seeding policy")
        if not self.format.seeding_matters and self.policy is not None:
            object.__setattr__(self, "policy", None)

    @property
    def name(self) -> str:
        if self.policy is None:
            return self.format.name
        return f"{self.format.name}/{self.policy.short}"

    @property
    def slug(self) -> str:
        if self.policy is None:
            return self.format.id
        return f"{self.format.id}_{self.policy.value}"

    @property
    def code(self) -> int:
        """Stable identity used to derive this design's random substreams."""
        policy = 0 if self.policy in (None, SeedingPolicy.SEEDED) else 1
        return 2 * self.format.code + policy


def standard_designs() -> list[Design]:
    """RR followed by every format under both policies, in the column order of the summary table."""
    designs = [Design(RR, None)]
    for fmt in TOURNAMENT_FORMATS:
        designs += [Design(fmt, SeedingPolicy.SEEDED), Design(fmt, SeedingPolicy.RANDOM)]
    return designs
