"""Exact 2D cutting stock solving via SAT: pack demanded copies of
rectangular item types onto identical sheets using as few sheets as
possible, with certified optimality."""

from .bounds import Bounds, area_lower_bound, compute_bounds, ffd_solution
from .encoding import CnfFormula, EncodeConfig, VarMap, decode_model, encode_formula
from .model import (
    Copy,
    Instance,
    InstanceError,
    ItemType,
    Placement,
    Solution,
    SolutionError,
    expand_demands,
    format_instance,
    parse_instance,
    read_solution,
    relabel_sheets,
    write_solution,
)
from .search import SolveOutcome, config_name, solve_instance
from .verify import VerifyReport, brute_force_optimal, verify_solution

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "CnfFormula",
    "Copy",
    "EncodeConfig",
    "Instance",
    "InstanceError",
    "ItemType",
    "Placement",
    "Solution",
    "SolutionError",
    "SolveOutcome",
    "VarMap",
    "VerifyReport",
    "area_lower_bound",
    "brute_force_optimal",
    "compute_bounds",
    "config_name",
    "decode_model",
    "encode_formula",
    "expand_demands",
    "ffd_solution",
    "format_instance",
    "parse_instance",
    "read_solution",
    "relabel_sheets",
    "solve_instance",
    "verify_solution",
    "write_solution",
]
