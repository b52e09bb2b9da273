"""SAT substrate: embedded CDCL engine, DIMACS/WCNF export, external adapter.

Two interchangeable engines exist: the compiled extension
(``cutstock.satcore._engine``, Cython) and the pure-Python reference
(``cutstock.satcore.engine``).  Import picks the compiled one when it is
built, unless ``CUTSTOCK_ENGINE=python`` forces the fallback;
``CUTSTOCK_ENGINE=compiled`` insists on the extension and fails loudly.
"""

from __future__ import annotations

import os

from . import engine as _engine_py
from .dimacs import format_dimacs, format_wcnf, parse_dimacs, parse_wcnf
from .engine import SAT, UNKNOWN, UNSAT, SolveResult
from .external import ExternalResult, parse_solver_output, run_external

PurePythonSolver = _engine_py.Solver

_forced = os.environ.get("CUTSTOCK_ENGINE", "").strip().lower()
try:
    from . import _engine as _engine_cy

    CompiledSolver = _engine_cy.Solver
except ImportError as _exc:
    if _forced == "compiled":
        raise ImportError(f"compiled engine requested but unavailable: {_exc}") from _exc
    CompiledSolver = None

if _forced == "python" or CompiledSolver is None:
    Solver = PurePythonSolver
    ENGINE = "python"
else:
    Solver = CompiledSolver
    ENGINE = "compiled"


def available_engines() -> dict[str, type]:
    """Engine name -> Solver class for everything importable here."""
    engines = {"python": PurePythonSolver}
    if CompiledSolver is not None:
        engines["compiled"] = CompiledSolver
    return engines


__all__ = [
    "SAT",
    "UNSAT",
    "UNKNOWN",
    "Solver",
    "SolveResult",
    "PurePythonSolver",
    "CompiledSolver",
    "ENGINE",
    "available_engines",
    "format_dimacs",
    "format_wcnf",
    "parse_dimacs",
    "parse_wcnf",
    "run_external",
    "parse_solver_output",
    "ExternalResult",
]
