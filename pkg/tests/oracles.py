"""Independent oracles used to freeze expected values.

These deliberately avoid the implementation paths they check: ordinal
arithmetic goes through sympy's ordinal type, closures and memberships through
pointwise grid reasoning, selections through direct evaluation.
"""
from __future__ import annotations

from sympy.sets.ordinals import Ordinal as SymOrdinal, ord0, omega

from hypersel.ordinal import Ordinal, successor
from hypersel.space import Region, Space


def to_sympy(a: Ordinal) -> SymOrdinal:
    total = ord0
    for e, c in a.terms:
        total = total + (omega**e) * c
    return total


def sym_compare(a: Ordinal, b: Ordinal) -> int:
    sa, sb = to_sympy(a), to_sympy(b)
    if sa == sb:
        return 0
    return -1 if sa < sb else 1


def sym_add_equals(a: Ordinal, b: Ordinal, out: Ordinal) -> bool:
    return to_sympy(a) + to_sympy(b) == to_sympy(out)


def grid_closure_members(space: Space, a: Region, k: int = 10) -> set:
    """Points of the grid in the closure of a: members, plus limit positions
    approached arbitrarily closely from below by members."""
    out = set()
    for pt in space.grid_points(k):
        if a.contains_point(pt):
            out.add(pt)
            continue
        for b, pos in space.point_coords(pt):
            if not pos.is_limit:
                continue
            below = [g for g in space.grid_positions(b, k) if g < pos]
            approached = True
            for c in below:
                if not any(
                    c < g < pos and a.covers_position(b, g)
                    for g in space.grid_positions(b, k)
                ):
                    # the grid cannot witness approach past c; try exact cover
                    probe = Region.make(space, [(b, successor(c), pos, False)])
                    if probe.intersect(a).is_empty:
                        approached = False
                        break
            if approached and any(
                a.covers_position(b, g) for g in below
            ):
                out.add(pt)
                break
    return out


def pointwise_bracket_members(f, c: Region, k: int = 10) -> set:
    """Grid points x with f(C | {x}) = x, by direct evaluation."""
    space = f.space
    out = set()
    for pt in space.grid_points(k):
        if f.evaluate(c.add_point(pt)) == pt:
            out.add(pt)
    return out
