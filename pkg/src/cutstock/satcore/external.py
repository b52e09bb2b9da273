"""Run an external SAT/MaxSAT solver on a problem file and parse its output.

The command template gets ``{input}`` substituted with the problem path
(appended as the last argument when the placeholder is absent).  The solver
is expected to follow the usual output conventions: an ``s`` status line
(SATISFIABLE / UNSATISFIABLE / OPTIMUM FOUND / UNKNOWN), ``v`` model lines
with signed literals or a 0/1 string, and optional ``o`` cost lines.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"


@dataclass
class ExternalResult:
    status: str
    optimal: bool = False
    model: list[bool] | None = None  # index 0 unused
    cost: int | None = None
    diagnostic: str = ""


def parse_solver_output(text: str) -> ExternalResult:
    status = UNKNOWN
    optimal = False
    cost = None
    value_tokens: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            tail = line[2:].strip().upper()
            if tail == "SATISFIABLE":
                status = SAT
            elif tail == "UNSATISFIABLE":
                status = UNSAT
            elif tail == "OPTIMUM FOUND":
                status, optimal = SAT, True
            else:
                status = UNKNOWN
        elif line.startswith("o "):
            try:
                cost = int(line[2:].strip())
            except ValueError:
                pass
        elif line.startswith("v ") or line == "v":
            value_tokens.extend(line[2:].split())

    model = None
    if status == SAT and value_tokens:
        if all(set(tok) <= {"0", "1"} for tok in value_tokens):
            bits = "".join(value_tokens)
            model = [False] + [b == "1" for b in bits]
        else:
            lits = []
            for tok in value_tokens:
                try:
                    lits.append(int(tok))
                except ValueError:
                    return ExternalResult(UNKNOWN, diagnostic=f"bad model token {tok!r}")
            lits = [l for l in lits if l != 0]
            size = max((abs(l) for l in lits), default=0)
            model = [False] * (size + 1)
            for l in lits:
                model[abs(l)] = l > 0
    if status == SAT and model is None:
        return ExternalResult(UNKNOWN, diagnostic="SAT status without a model line")
    return ExternalResult(status, optimal, model, cost)


def run_external(
    command: str, problem_path: str, time_limit: float | None = None
) -> ExternalResult:
    if "{input}" in command:
        argv = [a.replace("{input}", problem_path) for a in shlex.split(command)]
    else:
        argv = shlex.split(command) + [problem_path]
    try:
        proc = subprocess.run(
            argv, capture_output=True, text=True, timeout=time_limit
        )
    except subprocess.TimeoutExpired:
        return ExternalResult(UNKNOWN, diagnostic=f"timeout after {time_limit}s")
    except OSError as exc:
        return ExternalResult(UNKNOWN, diagnostic=f"failed to run {argv[0]}: {exc}")
    result = parse_solver_output(proc.stdout)
    if result.status == UNKNOWN and not result.diagnostic:
        result.diagnostic = (
            f"no verdict in solver output (exit {proc.returncode}); "
            f"stderr: {proc.stderr.strip()[:500]}"
        )
    return result
