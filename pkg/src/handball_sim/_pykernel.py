"""Pure-Python simulation backend built on the reference engine."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from handball_sim.draw import draw_groups
from handball_sim.engine import MeetingLedger, play_tournament
from handball_sim.formats import Design, StructuralError
from handball_sim.metrics import Accumulator
from handball_sim.outcomes import generate_outcomes
from handball_sim.rng import TAG_DRAW, TAG_TIEBREAK, CounterStream


def run_block(designs: Sequence[Design], matrix: np.ndarray, seed: int, start: int, stop: int) -> list[Accumulator]:
    n = matrix.shape[0]
    accs = [Accumulator(n_teams=n) for _ in designs]
    for run in range(start, stop):
        outcomes = generate_outcomes(matrix, seed, run)
        for design, acc in zip(designs, accs):
            draw_rng = CounterStream.for_run(seed, run, TAG_DRAW + design.code)
            tiebreak = CounterStream.for_run(seed, run, TAG_TIEBREAK + design.code)
            ledger = MeetingLedger()
            try:
                assignment = draw_groups(design.policy, design.format, draw_rng)
                result = play_tournament(design.format, assignment, outcomes, tiebreak, ledger)
            except StructuralError as exc:
                raise StructuralError(f"{design.name}: {exc}", run_index=run) from exc
            acc.add(result, matches=len(ledger.records))
    return accs
