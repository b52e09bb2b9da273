"""Independent geometric checks and a small-scale exhaustive optimum search.

Nothing here shares logic with the SAT encoding; the point is to have a
second opinion when testing it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Copy, Instance, Solution, expand_demands

BOUNDARY = "BOUNDARY"
OVERLAP = "OVERLAP"
DEMAND = "DEMAND"
SHEET_INDEX = "SHEET_INDEX"
ROTATION_FORBIDDEN = "ROTATION_FORBIDDEN"


@dataclass
class VerifyReport:
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, detail: str) -> None:
        self.violations.append((kind, detail))

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join(f"{kind}: {detail}" for kind, detail in self.violations)


def verify_solution(
    instance: Instance, solution: Solution, rotation_allowed: bool
) -> VerifyReport:
    """Check demand counts, sheet indices, boundaries and pairwise overlap.

    Rectangles are treated as half-open, so flush edges are legal.
    """
    report = VerifyReport()
    sheet_w, sheet_h = instance.sheet_width, instance.sheet_height

    counts: dict[tuple[int, int], int] = {}
    for p in solution.placements:
        key = (p.copy.type_index, p.copy.ordinal)
        counts[key] = counts.get(key, 0) + 1
    for ti, t in enumerate(instance.types):
        for ordinal in range(1, t.demand + 1):
            got = counts.pop((ti, ordinal), 0)
            if got != 1:
                report.add(DEMAND, f"copy c{ti + 1},{ordinal} placed {got} times")
    for (ti, ordinal), got in counts.items():
        report.add(DEMAND, f"unknown copy type={ti} ordinal={ordinal} placed {got} times")

    for p in solution.placements:
        label = p.copy.label()
        if p.sheet < 1:
            report.add(SHEET_INDEX, f"{label} on sheet {p.sheet}")
        if p.rotated and not rotation_allowed:
            report.add(ROTATION_FORBIDDEN, f"{label} is rotated")
        if p.x < 0 or p.y < 0 or p.x + p.placed_width > sheet_w or p.y + p.placed_height > sheet_h:
            report.add(
                BOUNDARY,
                f"{label} at ({p.x},{p.y}) size {p.placed_width}x{p.placed_height} "
                f"exceeds the {sheet_w}x{sheet_h} sheet",
            )

    by_sheet: dict[int, list] = {}
    for p in solution.placements:
        by_sheet.setdefault(p.sheet, []).append(p)
    for sheet, group in sorted(by_sheet.items()):
        for i in range(len(group)):
            a = group[i]
            for b in group[i + 1 :]:
                if (
                    a.x < b.x + b.placed_width
                    and b.x < a.x + a.placed_width
                    and a.y < b.y + b.placed_height
                    and b.y < a.y + a.placed_height
                ):
                    report.add(
                        OVERLAP,
                        f"{a.copy.label()} and {b.copy.label()} overlap on sheet {sheet}",
                    )
    return report


class OracleLimitError(ValueError):
    """Instance is too large for exhaustive search."""


def brute_force_optimal(
    instance: Instance,
    rotation: bool,
    max_copies: int = 7,
    max_sheet_area: int = 64,
) -> int:
    """Exhaustive minimum sheet count for small instances.

    Depth-first search over sheet assignments, positions and orientations,
    pruned by canonical ordering: copies of a type get non-decreasing sheet
    indices, sheets are first used in copy order, and same-type copies
    sharing a sheet are placed in increasing (x, y, rotated) order.  Any
    feasible packing can be permuted/relabelled into this form, so the
    pruning loses nothing.
    """
    instance.validate(rotation)
    copies = expand_demands(instance)
    n = len(copies)
    sheet_w, sheet_h = instance.sheet_width, instance.sheet_height
    if n > max_copies:
        raise OracleLimitError(f"{n} copies exceeds oracle limit {max_copies}")
    if sheet_w * sheet_h > max_sheet_area:
        raise OracleLimitError(
            f"sheet area {sheet_w * sheet_h} exceeds oracle limit {max_sheet_area}"
        )

    # big items first; stable within a type so ordinals stay ordered
    order = sorted(range(n), key=lambda i: (-copies[i].area, copies[i].type_index))
    sheet_area = sheet_w * sheet_h

    def orientations(c: Copy) -> list[tuple[bool, int, int]]:
        opts = []
        if c.width <= sheet_w and c.height <= sheet_h:
            opts.append((False, c.width, c.height))
        if rotation and c.width != c.height and c.height <= sheet_w and c.width <= sheet_h:
            opts.append((True, c.height, c.width))
        return opts

    opts_by_copy = [orientations(c) for c in copies]
    lower = max(1, -(-instance.total_item_area // sheet_area))

    def can_pack(k: int) -> bool:
        placed: list[list[tuple[int, int, int, int]]] = [[] for _ in range(k + 1)]
        free = [sheet_area] * (k + 1)
        # per scan position: (sheet, x, y, rot) of the previous same-type copy
        prev_slot: dict[int, tuple[int, int, int, bool]] = {}

        def rect_fits(sheet: int, x: int, y: int, w: int, h: int) -> bool:
            for ox, oy, ow, oh in placed[sheet]:
                if x < ox + ow and ox < x + w and y < oy + oh and oy < y + h:
                    return False
            return True

        def place(pos: int, max_used: int, remaining_area: int) -> bool:
            if pos == len(order):
                return True
            ci = order[pos]
            c = copies[ci]
            if remaining_area > sum(free[1 : k + 1]):
                return False
            prev = prev_slot.get(c.type_index)
            lo = prev[0] if prev else 1
            hi = min(k, max_used + 1)
            for sheet in range(lo, hi + 1):
                if free[sheet] < c.area:
                    continue
                for rot, w, h in opts_by_copy[ci]:
                    for x in range(sheet_w - w + 1):
                        for y in range(sheet_h - h + 1):
                            if prev and sheet == prev[0] and (x, y, rot) <= prev[1:]:
                                continue
                            if not rect_fits(sheet, x, y, w, h):
                                continue
                            placed[sheet].append((x, y, w, h))
                            free[sheet] -= c.area
                            prev_slot[c.type_index] = (sheet, x, y, rot)
                            if place(pos + 1, max(max_used, sheet), remaining_area - c.area):
                                return True
                            placed[sheet].pop()
                            free[sheet] += c.area
                            if prev is None:
                                del prev_slot[c.type_index]
                            else:
                                prev_slot[c.type_index] = prev
            return False

        return place(0, 0, instance.total_item_area)

    for k in range(lower, n + 1):
        if can_pack(k):
            return k
    raise AssertionError("one sheet per copy must always pack")
