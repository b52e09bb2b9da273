"""CNF encoding of fixed-sheet-count packing feasibility, and model decoding.

Coordinates are order-encoded: ``x_at_most(c, e)`` holds when copy c sits at
x <= e.  Threshold variables exist for e in 0..W-2 only; e >= W-1 is the
constant TRUE and e < 0 the constant FALSE, folded away at emission time.
Non-overlap between two copies is activated only when both share a sheet,
via guard literals on their sheet-assignment variables.

Clause families are counted separately so tests can audit the formula
against closed-form sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Copy, Instance, Placement, Solution


@dataclass(frozen=True)
class EncodeConfig:
    sheets: int
    rotation: bool = False
    symmetry_breaking: bool = False

    def __post_init__(self):
        if self.sheets < 1:
            raise ValueError("sheet count must be >= 1")


class VarMap:
    """Deterministic numbering of all Boolean variables, kind-major.

    Order: sheet assignment, x thresholds, y thresholds, left-of, below,
    rotation (rotation mode only), sheet used.  Copies are 0-based, sheets
    1-based.
    """

    def __init__(self, num_copies: int, width: int, height: int, config: EncodeConfig):
        if num_copies < 1:
            raise ValueError("need at least one copy")
        self.n = num_copies
        self.width = width
        self.height = height
        self.sheets = config.sheets
        self.rotation = config.rotation
        n, k = num_copies, config.sheets
        self._sheet0 = 0
        self._x0 = self._sheet0 + n * k
        self._y0 = self._x0 + n * (width - 1)
        self._left0 = self._y0 + n * (height - 1)
        self._below0 = self._left0 + n * (n - 1)
        self._rot0 = self._below0 + n * (n - 1)
        self._used0 = self._rot0 + (n if config.rotation else 0)
        self.total = self._used0 + k

    def sheet(self, c: int, j: int) -> int:
        assert 0 <= c < self.n and 1 <= j <= self.sheets
        return self._sheet0 + c * self.sheets + j

    def x_at_most(self, c: int, e: int) -> int:
        assert 0 <= c < self.n and 0 <= e <= self.width - 2
        return self._x0 + c * (self.width - 1) + e + 1

    def y_at_most(self, c: int, f: int) -> int:
        assert 0 <= c < self.n and 0 <= f <= self.height - 2
        return self._y0 + c * (self.height - 1) + f + 1

    def _pair(self, c: int, d: int) -> int:
        assert c != d
        return c * (self.n - 1) + (d if d < c else d - 1)

    def left(self, c: int, d: int) -> int:
        return self._left0 + self._pair(c, d) + 1

    def below(self, c: int, d: int) -> int:
        return self._below0 + self._pair(c, d) + 1

    def rot(self, c: int) -> int:
        assert self.rotation and 0 <= c < self.n
        return self._rot0 + c + 1

    def used(self, j: int) -> int:
        assert 1 <= j <= self.sheets
        return self._used0 + j


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[list[int]] = field(default_factory=list)
    family_counts: dict[str, int] = field(default_factory=dict)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def add(self, family: str, lits: list[int]) -> None:
        assert lits, "empty clause emitted"
        assert len({abs(l) for l in lits}) == len(lits), "repeated variable in clause"
        self.clauses.append(lits)
        self.family_counts[family] = self.family_counts.get(family, 0) + 1


def build_varmap(copies: tuple[Copy, ...], instance: Instance, config: EncodeConfig) -> VarMap:
    return VarMap(len(copies), instance.sheet_width, instance.sheet_height, config)


def _permitted_orientations(c: Copy, instance: Instance, config: EncodeConfig) -> list[bool]:
    """Orientations (rotated?) that keep the copy inside the sheet.

    With symmetry breaking on, squares are pinned to unrotated; this is
    exactly the set the rotation-fixing units leave open.
    """
    w, h = instance.sheet_width, instance.sheet_height
    if not config.rotation:
        return [False]
    fits_plain = c.width <= w and c.height <= h
    fits_rot = c.height <= w and c.width <= h
    if config.symmetry_breaking:
        if c.width == c.height:
            return [False]
        if fits_plain and not fits_rot:
            return [False]
        if fits_rot and not fits_plain:
            return [True]
        return [False, True]
    out = []
    if fits_plain:
        out.append(False)
    if fits_rot:
        out.append(True)
    return out or [False]


def encode_formula(
    copies: tuple[Copy, ...], instance: Instance, config: EncodeConfig
) -> tuple[VarMap, CnfFormula]:
    """Build the feasibility formula for config.sheets sheets."""
    instance.validate(config.rotation)
    vm = build_varmap(copies, instance, config)
    formula = CnfFormula(vm.total)
    n, k = vm.n, vm.sheets
    width, height = vm.width, vm.height

    # one sheet per copy
    for c in range(n):
        formula.add("exactly_one", [vm.sheet(c, j) for j in range(1, k + 1)])
        for j1 in range(1, k + 1):
            for j2 in range(j1 + 1, k + 1):
                formula.add("exactly_one", [-vm.sheet(c, j1), -vm.sheet(c, j2)])

    # coordinate thresholds are monotone
    for c in range(n):
        for e in range(width - 2):
            formula.add("order", [-vm.x_at_most(c, e), vm.x_at_most(c, e + 1)])
        for f in range(height - 2):
            formula.add("order", [-vm.y_at_most(c, f), vm.y_at_most(c, f + 1)])

    # some separating direction must hold for same-sheet pairs
    for c in range(n):
        for d in range(c + 1, n):
            for j in range(1, k + 1):
                formula.add(
                    "separation",
                    [
                        -vm.sheet(c, j),
                        -vm.sheet(d, j),
                        vm.left(c, d),
                        vm.left(d, c),
                        vm.below(c, d),
                        vm.below(d, c),
                    ],
                )

    # tie the separating directions to coordinates, per sheet and orientation
    def orientation_cases(c: int):
        copy = copies[c]
        if config.rotation:
            # clause literal is satisfied when the copy is in the *other*
            # orientation, so the body only binds in the named one
            return [(vm.rot(c), copy.width, copy.height), (-vm.rot(c), copy.height, copy.width)]
        return [(0, copy.width, copy.height)]

    def link_axis(c: int, d: int, rel: int, extent: int, limit: int, threshold, orient: int):
        for j in range(1, k + 1):
            guard = [-vm.sheet(c, j), -vm.sheet(d, j)]
            head = guard + ([orient] if orient else []) + [-rel]
            # x_d >= extent even when x_c = 0
            if extent - 1 < limit - 1:
                formula.add("link", head + [-threshold(d, extent - 1)])
            else:
                formula.add("link", list(head))
            for e in range(limit - extent):
                body = [threshold(c, e)]
                if e + extent < limit - 1:
                    body.append(-threshold(d, e + extent))
                formula.add("link", head + body)

    for c in range(n):
        for d in range(n):
            if c == d:
                continue
            for orient, ew, eh in orientation_cases(c):
                link_axis(c, d, vm.left(c, d), ew, width, vm.x_at_most, orient)
                link_axis(c, d, vm.below(c, d), eh, height, vm.y_at_most, orient)

    # every copy fits inside its sheet
    def domain_clause(selector: int, threshold, c: int, extent: int, limit: int):
        slack = limit - extent
        if slack >= limit - 1:
            return  # constant TRUE
        if slack < 0:
            if selector:
                formula.add("domain", [selector])
            else:
                raise ValueError("copy does not fit the sheet; instance validation missed it")
        else:
            lits = ([selector] if selector else []) + [threshold(c, slack)]
            formula.add("domain", lits)

    for c in range(n):
        copy = copies[c]
        if config.rotation:
            domain_clause(vm.rot(c), vm.x_at_most, c, copy.width, width)
            domain_clause(-vm.rot(c), vm.x_at_most, c, copy.height, width)
            domain_clause(vm.rot(c), vm.y_at_most, c, copy.height, height)
            domain_clause(-vm.rot(c), vm.y_at_most, c, copy.width, height)
        else:
            domain_clause(0, vm.x_at_most, c, copy.width, width)
            domain_clause(0, vm.y_at_most, c, copy.height, height)

    # usage indicators
    for c in range(n):
        for j in range(1, k + 1):
            formula.add("usage", [-vm.sheet(c, j), vm.used(j)])

    if config.symmetry_breaking:
        _encode_symmetry_breaking(copies, instance, config, vm, formula)
    return vm, formula


def _encode_symmetry_breaking(
    copies: tuple[Copy, ...],
    instance: Instance,
    config: EncodeConfig,
    vm: VarMap,
    formula: CnfFormula,
) -> None:
    n, k = vm.n, vm.sheets
    width, height = vm.width, vm.height
    permitted = [_permitted_orientations(c, instance, config) for c in copies]

    def extents(c: int) -> list[tuple[int, int]]:
        return [
            (copies[c].height, copies[c].width) if rot else (copies[c].width, copies[c].height)
            for rot in permitted[c]
        ]

    # oversized pairs can never sit side by side / stacked
    for c in range(n):
        for d in range(c + 1, n):
            if all(wc + wd > width for wc, _ in extents(c) for wd, _ in extents(d)):
                formula.add("sb_large", [-vm.left(c, d)])
                formula.add("sb_large", [-vm.left(d, c)])
            if all(hc + hd > height for _, hc in extents(c) for _, hd in extents(d)):
                formula.add("sb_large", [-vm.below(c, d)])
                formula.add("sb_large", [-vm.below(d, c)])

    # later copies of a type never go strictly left of earlier ones
    for c in range(n):
        for d in range(c + 1, n):
            if copies[c].type_index == copies[d].type_index:
                formula.add("sb_same_type", [-vm.left(d, c)])

    # pin the rotation flag when only one orientation is possible
    if config.rotation:
        for c in range(n):
            if permitted[c] == [False]:
                formula.add("sb_orientation", [-vm.rot(c)])
            elif permitted[c] == [True]:
                formula.add("sb_orientation", [vm.rot(c)])

    # sheets are brought into use in index order
    for j in range(1, k):
        formula.add("sb_sheet_order", [-vm.used(j + 1), vm.used(j)])


def decode_model(
    model: list[bool],
    vm: VarMap,
    copies: tuple[Copy, ...],
    instance: Instance,
    config: EncodeConfig,
) -> Solution:
    """Read a satisfying assignment back into placements."""
    placements = []
    for c, copy in enumerate(copies):
        sheets = [j for j in range(1, vm.sheets + 1) if model[vm.sheet(c, j)]]
        if len(sheets) != 1:
            raise RuntimeError(
                f"copy {copy.label()} assigned to {len(sheets)} sheets; encoder bug"
            )
        x = vm.width - 1
        for e in range(vm.width - 1):
            if model[vm.x_at_most(c, e)]:
                x = e
                break
        y = vm.height - 1
        for f in range(vm.height - 1):
            if model[vm.y_at_most(c, f)]:
                y = f
                break
        rotated = bool(config.rotation and model[vm.rot(c)])
        placements.append(Placement(copy, sheets[0], x, y, rotated))
    return Solution(instance, tuple(placements))
