import random
import sys

import pytest

from cutstock.bounds import compute_bounds
from cutstock.encoding import EncodeConfig, encode_formula
from cutstock.model import Instance, ItemType, expand_demands
from cutstock.satcore import SAT, UNSAT
from cutstock.search import OPTIMAL, config_name, solve_instance
from cutstock.verify import brute_force_optimal, verify_solution

from conftest import random_instance

BRIDGE = f"{sys.executable} -m cutstock.satcore.extsolver_cli {{input}}"


def test_config_names():
    assert config_name("sat", False, False) == "CSP"
    assert config_name("sat", True, False) == "CSP_R"
    assert config_name("inc", False, True) == "CSP_INC_SB"
    assert config_name("maxsat", True, True) == "CSP_MS_R_SB"


def test_demo_all_strategies(demo, engine_cls):
    for strategy in ("sat", "inc", "maxsat"):
        for rotation in (False, True):
            for sb in (False, True):
                out = solve_instance(
                    demo, strategy, rotation, sb, engine=engine_cls
                )
                assert out.status == OPTIMAL
                assert out.best_k == 2
                assert verify_solution(demo, out.best_solution, rotation).ok
                assert len(out.calls) == 0  # bounds coincide, no solver work


def test_lb_below_ub_single_call(engine_cls):
    # one 3x2 and one 2x2 on a 6x4 sheet: area bound 1, FFD needs 1 as well?
    inst = Instance(6, 4, (ItemType(3, 2, 1), ItemType(2, 2, 1)))
    bounds = compute_bounds(inst, False)
    assert bounds.lower == 1
    out = solve_instance(inst, "sat", engine=engine_cls)
    assert out.status == OPTIMAL and out.best_k == 1


def test_full_sheet_copies(engine_cls):
    inst = Instance(2, 2, (ItemType(2, 2, 3),))
    out = solve_instance(inst, "sat", engine=engine_cls)
    assert out.status == OPTIMAL and out.best_k == 3
    assert len(out.calls) == 0  # lower bound equals FFD here


def force_gap_instance():
    """FFD needs two sheets here but everything fits on one, so the window
    is open and at least one solver call happens."""
    return Instance(4, 4, (ItemType(1, 2, 3), ItemType(1, 4, 1), ItemType(3, 2, 1)))


def test_binary_search_runs_calls(engine_cls):
    inst = force_gap_instance()
    bounds = compute_bounds(inst, False)
    best = brute_force_optimal(inst, False)
    out = solve_instance(inst, "sat", engine=engine_cls)
    assert out.best_k == best and out.status == OPTIMAL
    if bounds.lower < bounds.upper:
        assert len(out.calls) >= 1


def test_incremental_builds_once(engine_cls):
    inst = force_gap_instance()
    bounds = compute_bounds(inst, False)
    assert bounds.lower < bounds.upper, "fixture must force at least one call"
    out = solve_instance(inst, "inc", engine=engine_cls)
    assert out.status == OPTIMAL
    assert out.formula_builds == 1
    assert len(out.calls) >= 1
    sat_outcome = solve_instance(inst, "sat", engine=engine_cls)
    assert sat_outcome.best_k == out.best_k
    assert sat_outcome.formula_builds == len(sat_outcome.calls)


def test_incremental_reuses_handle_across_iterations(engine_cls):
    # six 3x3 pieces on a 5x5 sheet: one per sheet, but the area bound says
    # three, so binary search needs two refutations on the same handle
    inst = Instance(5, 5, (ItemType(3, 3, 6),))
    bounds = compute_bounds(inst, False)
    assert (bounds.lower, bounds.upper) == (3, 6)
    out = solve_instance(inst, "inc", engine=engine_cls)
    assert out.status == OPTIMAL and out.best_k == 6
    assert out.formula_builds == 1
    assert len(out.calls) >= 2
    assert all(c.verdict == UNSAT for c in out.calls)


def test_cross_strategy_agreement_small_suite(engine_cls):
    rng = random.Random(77)
    for _ in range(8):
        inst = random_instance(rng, max_copies=5, max_dim=5)
        for rotation in (False, True):
            best = brute_force_optimal(inst, rotation)
            for strategy in ("sat", "inc", "maxsat"):
                for sb in (False, True):
                    out = solve_instance(inst, strategy, rotation, sb, engine=engine_cls)
                    assert out.status == OPTIMAL, (inst.name, strategy, out.status)
                    assert out.best_k == best, (inst.name, strategy, rotation, sb)
                    assert verify_solution(inst, out.best_solution, rotation).ok


def test_optimal_always_certified(engine_cls):
    rng = random.Random(88)
    for _ in range(10):
        inst = random_instance(rng)
        out = solve_instance(inst, "sat", engine=engine_cls)
        assert out.status == OPTIMAL
        area_lb = compute_bounds(inst, False).lower
        unsat_below = any(
            c.verdict == UNSAT and c.k == out.best_k - 1 for c in out.calls
        )
        assert out.best_k == area_lb or unsat_below
        assert out.lower_bound == out.best_k


def test_incremental_matches_fresh_verdicts(engine_cls):
    rng = random.Random(99)
    for _ in range(6):
        inst = random_instance(rng, max_copies=5, max_dim=5)
        copies = expand_demands(inst)
        for rotation in (False, True):
            bounds = compute_bounds(inst, rotation)
            if bounds.lower >= bounds.upper:
                continue
            config = EncodeConfig(bounds.upper, rotation, False)
            vm, formula = encode_formula(copies, inst, config)
            handle = engine_cls(formula.num_vars)
            for c in formula.clauses:
                handle.add_clause(c)
            for m in range(bounds.lower, bounds.upper + 1):
                assumptions = [-vm.used(j) for j in range(m + 1, bounds.upper + 1)]
                under = handle.solve(assumptions=assumptions).status
                _, fresh_formula = encode_formula(copies, inst, EncodeConfig(m, rotation, False))
                fresh = engine_cls(fresh_formula.num_vars)
                for c in fresh_formula.clauses:
                    fresh.add_clause(c)
                assert under == fresh.solve().status == (SAT if m >= brute_force_optimal(inst, rotation) else UNSAT)


def test_maxsat_external_backend(demo, engine_cls):
    inst = force_gap_instance()
    best = brute_force_optimal(inst, False)
    out = solve_instance(inst, "maxsat", solver_cmd=BRIDGE, engine=engine_cls)
    assert out.backend == "external"
    assert out.status == OPTIMAL and out.best_k == best
    assert verify_solution(inst, out.best_solution, False).ok


def test_maxsat_external_fallback(engine_cls):
    inst = force_gap_instance()
    best = brute_force_optimal(inst, False)
    out = solve_instance(inst, "maxsat", solver_cmd="no-such-binary-here", engine=engine_cls)
    assert out.backend == "internal"
    assert out.status == OPTIMAL and out.best_k == best


def test_timeout_returns_feasible_witness(engine_cls):
    inst = force_gap_instance()
    for strategy in ("sat", "inc", "maxsat"):
        out = solve_instance(inst, strategy, engine=engine_cls, time_limit=0.0)
        assert out.status == "FEASIBLE", strategy  # no time to improve on FFD
        assert out.best_solution is not None
        assert verify_solution(inst, out.best_solution, False).ok
        assert out.best_k == 2 and out.lower_bound == 1
    full = solve_instance(inst, "sat", engine=engine_cls, time_limit=60.0)
    assert full.status == OPTIMAL and full.best_k == 1


def test_corrupt_model_reported_not_trusted(engine_cls):
    """A solver returning bogus models must surface as a model error."""

    class LyingSolver:
        def __init__(self, num_vars, seed=0):
            self.inner = engine_cls(num_vars, seed)

        def add_clause(self, lits):
            self.inner.add_clause(lits)

        def solve(self, **kwargs):
            result = self.inner.solve(**kwargs)
            if result.status == "SAT":
                flipped = list(result.model)
                for v in range(1, len(flipped)):
                    flipped[v] = not flipped[v]
                # keep exactly-one sheet structure broken but decodable:
                # flipping everything leaves multiple sheet bits set or none
                result = type(result)(result.status, flipped, result.stats)
            return result

    inst = force_gap_instance()
    with pytest.raises(RuntimeError):
        # wholesale flipping breaks the one-sheet-per-copy invariant
        solve_instance(inst, "sat", engine=LyingSolver)


def test_bad_decoded_placement_reported(engine_cls, monkeypatch):
    """Decoded packings are verified; a failing one ends the run honestly."""
    from cutstock import search as search_mod
    from cutstock.model import Placement, Solution

    real_decode = search_mod.decode_model

    def squashing_decode(model, vm, copies, instance, config):
        sol = real_decode(model, vm, copies, instance, config)
        piled = tuple(Placement(p.copy, 1, 0, 0, False) for p in sol.placements)
        return Solution(instance, piled)

    monkeypatch.setattr(search_mod, "decode_model", squashing_decode)
    out = solve_instance(force_gap_instance(), "sat", engine=engine_cls)
    assert out.status == "INFEASIBLE_MODEL_ERROR"
    assert "OVERLAP" in out.detail


def test_rotation_never_hurts(engine_cls):
    rng = random.Random(111)
    for _ in range(6):
        inst = random_instance(rng)
        plain = solve_instance(inst, "sat", rotation=False, engine=engine_cls)
        rotated = solve_instance(inst, "sat", rotation=True, engine=engine_cls)
        assert rotated.best_k <= plain.best_k


def test_time_to_best_set(engine_cls):
    inst = force_gap_instance()
    out = solve_instance(inst, "inc", engine=engine_cls)
    assert 0.0 <= out.time_to_best <= out.wall_time + 1e-6
