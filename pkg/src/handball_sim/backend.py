"""Backend selection: the compiled kernel when it imports, else pure Python.

Set ``HANDBALL_SIM_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from handball_sim import _pykernel
from handball_sim.formats import Design, StructuralError
from handball_sim.metrics import Accumulator
from handball_sim.program import compile_design

try:
    from handball_sim import _kernel
except ImportError:  # extension not built
    _kernel = None

AVAILABLE = ("cython", "python") if _kernel is not None else ("python",)


def default_backend() -> str:
    forced = os.environ.get("HANDBALL_SIM_BACKEND", "").strip().lower()
    if forced:
        if forced not in ("cython", "python"):
            raise ValueError(f"HANDBALL_SIM_BACKEND must be 'cython' or 'python', got {forced!r}")
        if forced not in AVAILABLE:
            raise ImportError("the compiled kernel is not built; run `pip install -e .` first")
        return forced
    return AVAILABLE[0]


BACKEND = default_backend()


def _run_compiled(designs: Sequence[Design], matrix: np.ndarray, seed: int, start: int, stop: int) -> list[Accumulator]:
    n, d = matrix.shape[0], len(designs)
    programs = _kernel.ProgramSet([compile_design(x) for x in designs])
    place = np.zeros((d, n, 4), dtype=np.int64)
    finals = np.zeros((d, n, n), dtype=np.int64)
    sf = np.zeros((d, n), dtype=np.int64)
    sf_pairs = np.zeros((d, n, n), dtype=np.int64)
    matches = np.zeros(d, dtype=np.int64)
    err, err_run = _kernel.run_block(
        programs, np.ascontiguousarray(matrix, dtype=np.float64), seed & 0xFFFFFFFFFFFFFFFF,
        start, stop, place, finals, sf, sf_pairs, matches,
    )
    if err:
        # replay the failing run in Python for a precise diagnostic
        _pykernel.run_block(designs, matrix, seed, err_run, err_run + 1)
        raise StructuralError("a pair would meet a third time", run_index=err_run)
    return [
        Accumulator.from_arrays(stop - start, matches[i], place[i], finals[i], sf[i], sf_pairs[i])
        for i in range(d)
    ]


def run_block(designs: Sequence[Design], matrix: np.ndarray, seed: int, start: int, stop: int,
              backend: str | None = None) -> list[Accumulator]:
    """Tally runs ``start .. stop-1`` of every design into fresh accumulators."""
    backend = backend or BACKEND
    if backend == "cython":
        if _kernel is None:
            raise ImportError("the compiled kernel is not built")
        return _run_compiled(designs, matrix, seed, start, stop)
    if backend == "python":
        return _pykernel.run_block(designs, matrix, seed & 0xFFFFFFFFFFFFFFFF, start, stop)
    raise ValueError(f"unknown backend {backend!r}")


def outcome_tables_compiled(matrix: np.ndarray, seed: int, run: int) -> np.ndarray:
    """``(2, n, n)`` outcome tables drawn by the compiled kernel."""
    if _kernel is None:
        raise ImportError("the compiled kernel is not built")
    return np.array(_kernel.outcome_block(np.ascontiguousarray(matrix, dtype=np.float64), seed, run), dtype=bool)
