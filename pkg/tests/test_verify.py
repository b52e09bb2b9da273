import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutstock.model import Instance, ItemType, Placement, Solution, expand_demands
from cutstock.verify import (
    BOUNDARY,
    DEMAND,
    OVERLAP,
    ROTATION_FORBIDDEN,
    SHEET_INDEX,
    OracleLimitError,
    brute_force_optimal,
    verify_solution,
)

from conftest import random_instance
from test_model import demo_solution


def test_demo_layout_verifies(demo):
    report = verify_solution(demo, demo_solution(demo), rotation_allowed=False)
    assert report.ok, str(report)


def test_overlap_detected(demo):
    sol = demo_solution(demo)
    placements = [
        Placement(p.copy, p.sheet, 2 if (p.copy.type_index, p.copy.ordinal) == (0, 2) else p.x, p.y)
        for p in sol.placements
    ]
    report = verify_solution(demo, Solution(demo, tuple(placements)), False)
    assert not report.ok
    assert any(kind == OVERLAP for kind, _ in report.violations)


def test_demand_violation(demo):
    sol = demo_solution(demo)
    report = verify_solution(demo, Solution(demo, sol.placements[:-1]), False)
    assert any(kind == DEMAND for kind, _ in report.violations)


def test_boundary_violation(demo):
    sol = demo_solution(demo)
    bad = (Placement(sol.placements[0].copy, 1, 4, 0),) + sol.placements[1:]
    report = verify_solution(demo, Solution(demo, bad), False)
    assert any(kind == BOUNDARY for kind, _ in report.violations)


def test_rotation_flag(demo):
    sol = demo_solution(demo)
    rot = (Placement(sol.placements[3].copy, 2, 4, 0, rotated=True),) + tuple(
        p for p in sol.placements if p.copy != sol.placements[3].copy
    )
    report = verify_solution(demo, Solution(demo, rot), rotation_allowed=False)
    assert any(kind == ROTATION_FORBIDDEN for kind, _ in report.violations)
    assert verify_solution(demo, Solution(demo, rot), rotation_allowed=True).ok


def test_sheet_index_violation(demo):
    sol = demo_solution(demo)
    bad = (Placement(sol.placements[0].copy, 0, 0, 0),) + sol.placements[1:]
    report = verify_solution(demo, Solution(demo, bad), False)
    assert any(kind == SHEET_INDEX for kind, _ in report.violations)


def test_touching_edges_are_legal():
    inst = Instance(4, 2, (ItemType(2, 2, 2),))
    c1, c2 = expand_demands(inst)
    sol = Solution(inst, (Placement(c1, 1, 0, 0), Placement(c2, 1, 2, 0)))
    assert verify_solution(inst, sol, False).ok


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_overlap_matches_interval_arithmetic(data):
    """Pairwise overlap agrees with an independent interval check."""
    w = data.draw(st.integers(2, 6))
    h = data.draw(st.integers(2, 6))
    inst = Instance(w, h, (ItemType(data.draw(st.integers(1, w)), data.draw(st.integers(1, h)), 2),))
    c1, c2 = expand_demands(inst)
    item = inst.types[0]
    x1 = data.draw(st.integers(0, w - item.width))
    y1 = data.draw(st.integers(0, h - item.height))
    x2 = data.draw(st.integers(0, w - item.width))
    y2 = data.draw(st.integers(0, h - item.height))
    sol = Solution(inst, (Placement(c1, 1, x1, y1), Placement(c2, 1, x2, y2)))
    report = verify_solution(inst, sol, False)

    ix = set(range(x1, x1 + item.width)) & set(range(x2, x2 + item.width))
    iy = set(range(y1, y1 + item.height)) & set(range(y2, y2 + item.height))
    overlapping = bool(ix and iy)
    assert report.ok == (not overlapping)


def test_oracle_demo(demo):
    assert brute_force_optimal(demo, rotation=False) == 2
    assert brute_force_optimal(demo, rotation=True) == 2


def test_oracle_trivial_cases():
    one = Instance(1, 1, (ItemType(1, 1, 1),))
    assert brute_force_optimal(one, rotation=False) == 1
    full = Instance(2, 2, (ItemType(2, 2, 3),))
    assert brute_force_optimal(full, rotation=False) == 3


def test_oracle_rotation_helps():
    inst = Instance(4, 4, (ItemType(2, 4, 1), ItemType(4, 2, 1)))
    assert brute_force_optimal(inst, rotation=False) == 2
    assert brute_force_optimal(inst, rotation=True) == 1


def test_oracle_rotation_only_fit():
    inst = Instance(3, 4, (ItemType(4, 1, 2),))
    assert brute_force_optimal(inst, rotation=True) == 1
    from cutstock.model import InstanceError

    with pytest.raises(InstanceError):
        brute_force_optimal(inst, rotation=False)


def test_oracle_two_wide_copies():
    inst = Instance(2, 1, (ItemType(2, 1, 2),))
    assert brute_force_optimal(inst, rotation=False) == 2


def test_oracle_limits():
    big = Instance(10, 10, (ItemType(1, 1, 1),))
    with pytest.raises(OracleLimitError):
        brute_force_optimal(big, rotation=False)
    many = Instance(6, 6, (ItemType(1, 1, 9),))
    with pytest.raises(OracleLimitError):
        brute_force_optimal(many, rotation=False, max_copies=8)
    assert brute_force_optimal(many, rotation=False, max_copies=9) == 1


def test_oracle_respects_area_bound():
    rng = random.Random(5)
    for _ in range(25):
        inst = random_instance(rng)
        area = inst.sheet_width * inst.sheet_height
        lb = max(1, -(-inst.total_item_area // area))
        k = brute_force_optimal(inst, rotation=False)
        assert k >= lb
