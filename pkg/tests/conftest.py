import random

import pytest

from cutstock.model import Instance, ItemType, parse_instance
from cutstock.satcore import available_engines

ENGINES = available_engines()

DEMO_TEXT = "6 4\n2\n3 2 3\n2 2 3\n"

# layout drawn in the worked example: five copies on sheet 1, one on sheet 2
DEMO_PLACEMENTS = [
    (0, 1, 1, 0, 0, 0),
    (0, 2, 1, 3, 0, 0),
    (0, 3, 2, 0, 0, 0),
    (1, 1, 1, 0, 2, 0),
    (1, 2, 1, 2, 2, 0),
    (1, 3, 1, 4, 2, 0),
]


@pytest.fixture(params=sorted(ENGINES))
def engine_cls(request):
    return ENGINES[request.param]


@pytest.fixture
def demo() -> Instance:
    return parse_instance(DEMO_TEXT, name="demo")


def random_instance(rng: random.Random, max_copies: int = 6, max_dim: int = 6) -> Instance:
    """Small instance where every type fits unrotated (valid in both modes).

    Sheet sides occasionally degenerate to 1 so the threshold-free
    coordinate paths get exercised too.
    """
    w = 1 if rng.random() < 0.05 else rng.randint(2, max_dim)
    h = 1 if rng.random() < 0.05 else rng.randint(2, max_dim)
    total = rng.randint(1, max_copies)
    types: list[ItemType] = []
    remaining = total
    while remaining > 0:
        demand = rng.randint(1, remaining)
        types.append(ItemType(rng.randint(1, w), rng.randint(1, h), demand))
        remaining -= demand
    return Instance(w, h, tuple(types), name=f"rand{rng.random():.6f}")


def random_cnf(rng: random.Random, max_vars: int = 20):
    """Random CNF in the style used for solver correctness checks."""
    n = rng.randint(3, max_vars)
    m = rng.randint(max(2, n // 2), int(4.5 * n))
    clauses = []
    for _ in range(m):
        size = rng.choice((1, 2, 3, 3))
        size = min(size, n)
        vs = rng.sample(range(1, n + 1), size)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return n, clauses
