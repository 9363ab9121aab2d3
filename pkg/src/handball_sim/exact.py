"""Exact metrics for small designs by enumerating every random choice.

The tournament is replayed once per leaf of its decision tree: every match
is a two-way branch weighted by the win probability, every draw step a
uniform branch, and every tie-break key a uniform insertion among the keys
drawn before it (so each tied block is ordered by a uniform permutation).
Leaves are visited depth first by replaying with a growing choice prefix.
The tree grows factorially, so this is meant for toy formats only.
"""

from __future__ import annotations

import bisect

import numpy as np

from handball_sim.draw import draw_groups
from handball_sim.engine import MeetingLedger, play_tournament
from handball_sim.formats import Design
from handball_sim.metrics import Accumulator, MetricsReport, finalize
from handball_sim.strength import validate_matrix

MAX_EXACT_TEAMS = 8


class _Script:
    """Replays a choice prefix and extends it with first choices."""

    def __init__(self, path: list[int]):
        self.path = path
        self.pos = 0
        self.arity: list[int] = []
        self.weight = 1.0

    def choose(self, probs: list[float]) -> int:
        if self.pos == len(self.path):
            self.path.append(0)
        c = self.path[self.pos]
        self.pos += 1
        self.arity.append(len(probs))
        self.weight *= probs[c]
        return c


class _ScriptedOutcomes:
    def __init__(self, script: _Script, matrix: np.ndarray):
        self.script = script
        self.matrix = matrix

    @property
    def n_teams(self) -> int:
        return self.matrix.shape[0]

    def winner(self, a: int, b: int, meeting: int) -> int:
        p = float(self.matrix[a - 1, b - 1])
        return a if self.script.choose([p, 1.0 - p]) == 0 else b


class _ScriptedStream:
    def __init__(self, script: _Script):
        self.script = script
        self.keys: list[float] = []

    def below(self, n: int) -> int:
        return self.script.choose([1.0 / n] * n)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def next_u64(self) -> float:
        k = len(self.keys)
        slot = self.script.choose([1.0 / (k + 1)] * (k + 1))
        lo = self.keys[slot - 1] if slot > 0 else 0.0
        hi = self.keys[slot] if slot < k else 1.0
        key = (lo + hi) / 2
        bisect.insort(self.keys, key)
        return key


def enumerate_design(design: Design, matrix: np.ndarray) -> Accumulator:
    """Weighted tallies over every outcome of ``design``; the weights sum to one."""
    matrix = validate_matrix(matrix)
    fmt = design.format
    if fmt.n_teams > MAX_EXACT_TEAMS or matrix.shape[0] != fmt.n_teams:
        raise ValueError(f"exact enumeration needs a matching matrix and at most {MAX_EXACT_TEAMS} teams")
    acc = Accumulator(n_teams=fmt.n_teams, weighted=True)
    path: list[int] = []
    while True:
        script = _Script(path)
        assignment = draw_groups(design.policy, fmt, _ScriptedStream(script))
        ledger = MeetingLedger()
        result = play_tournament(fmt, assignment, _ScriptedOutcomes(script, matrix), _ScriptedStream(script), ledger)
        if script.weight > 0.0:
            acc.add(result, weight=script.weight, matches=len(ledger.records))
        # backtrack to the deepest choice with an untried alternative
        depth = script.pos - 1
        while depth >= 0 and path[depth] + 1 >= script.arity[depth]:
            depth -= 1
        if depth < 0:
            return acc
        path = path[:depth] + [path[depth] + 1]


def exact_report(design: Design, matrix: np.ndarray, model: str = "exact") -> MetricsReport:
    return finalize(enumerate_design(design, matrix), design=design.name, model=model)
