"""The selection relation, derived interior/closure sets, and clopen separation.

For a selection f, a point is related to a closed set when adjoining it does
not change f's choice away from it.  The induced bracket of an open set V is
materialized exactly by structural recursion over the selection tree: order
primitives yield key rays, combinators split off the extreme-level preimage
and recurse into one fiber.  Every derived-set result is verified against its
defining invariants before being returned; a violation signals a defective
(non-continuous) selection or a model bug.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

from hypersel.ordinal import Ordinal
from hypersel.space import Point, Region, Space, clopen_modulo
from hypersel.selection import (
    JoinSelection,
    MeetSelection,
    OrderMaxSelection,
    OrderMinSelection,
    PatchedSelection,
    RestrictSelection,
    Selection,
    order_extremum,
)
from hypersel.space import next_point

__all__ = [
    "SelRel",
    "sel_rel",
    "DerivedSets",
    "DerivedSetsInvariantError",
    "derived_sets",
    "bracket_of",
    "refine_modulo",
    "clopen_separation",
    "TwoStepHint",
    "WitnessHint",
    "CutPointHint",
    "SeparationStuckError",
]


class SelRel(enum.Enum):
    NOT_RELATED = "not_related"
    RELATED = "related"
    STRICTLY_RELATED = "strictly_related"


def sel_rel(f: Selection, p: Point, a: Region) -> SelRel:
    """Related when f(A | {p}) = p; strictly when additionally p is outside A."""
    if f.evaluate(a.add_point(p)) != p:
        return SelRel.NOT_RELATED
    return SelRel.RELATED if a.contains_point(p) else SelRel.STRICTLY_RELATED


def _key_ray(space: Space, orientations, m: Point, upper: bool) -> Region:
    """Classes whose concatenation-order key is >= (upper) or <= that of m."""
    b_star, pos_star = m.branch, m.pos
    spans = []
    for b, top in enumerate(space.branches):
        if (b > b_star) == upper and b != b_star:
            spans.append((b, Ordinal(), top, True))
        elif b == b_star:
            asc = orientations[b]
            if upper == asc:
                spans.append((b, pos_star, top, True))
            else:
                spans.append((b, Ordinal(), pos_star, True))
    reg = Region.make(space, spans)
    # correct gluing classes by their canonical key
    for coords in space.gluings:
        pt = space.point(*coords[0])
        if pt.branch != b_star:
            member = (pt.branch > b_star) == upper
        else:
            asc = orientations[b_star]
            if upper == asc:
                member = pt.pos >= pos_star
            else:
                member = pt.pos <= pos_star
        if member:
            reg = reg.add_point(pt)
        else:
            reg = reg.remove_point(pt)
    return reg


def bracket_of(f: Selection, c: Region) -> Region:
    """{x in carrier : f(C | {x}) = x} for a nonempty closed C inside the carrier."""
    if c.is_empty:
        raise ValueError("bracket recursion needs a nonempty closed set")
    if isinstance(f, OrderMaxSelection):
        m = order_extremum(f.space, f.orientations, c, want_max=True)
        return _key_ray(f.space, f.orientations, m, upper=True).intersect(f.carrier)
    if isinstance(f, OrderMinSelection):
        m = order_extremum(f.space, f.orientations, c, want_max=False)
        return _key_ray(f.space, f.orientations, m, upper=False).intersect(f.carrier)
    if isinstance(f, JoinSelection):
        _, hi = f.decomp.eta_extremes(c)
        above = f.decomp.upper_strict(hi)
        fiber = f.decomp.fiber(hi)
        inner = bracket_of(f.fibers.get(hi), c.intersect(fiber))
        return above.union(inner)
    if isinstance(f, MeetSelection):
        lo, _ = f.decomp.eta_extremes(c)
        below = f.decomp.lower_strict(lo)
        fiber = f.decomp.fiber(lo)
        inner = bracket_of(f.fibers.get(lo), c.intersect(fiber))
        return below.union(inner)
    if isinstance(f, RestrictSelection):
        return bracket_of(f.parent, c).intersect(f.carrier)
    if isinstance(f, PatchedSelection):
        base = bracket_of(f.parent, c)
        return _patch_bracket(f, c, base)
    # fallback: pointwise evaluation over grid members and carrier endpoints
    return _pointwise_bracket(f, c)


def _patch_bracket(f: PatchedSelection, c: Region, base: Region) -> Region:
    space = f.space
    if c == f.at:
        # for x in C the argument stays C = the patched set
        inside = space.point_region(f.value).intersect(c)
        outside = base.difference(c)
        return outside.union(inside)
    extra = f.at.difference(c)
    if c.subset_of(f.at) and not extra.is_empty:
        pts = {space.point(b, sp.lo) for b, sp in extra.span_items()}
        if len(pts) == 1:
            x0 = pts.pop()
            if extra == space.point_region(x0):
                if f.value == x0:
                    return base.add_point(x0)
                return base.remove_point(x0)
    return base


def _pointwise_bracket(f: Selection, c: Region) -> Region:
    out = f.space.empty()
    cands = set(f.carrier.grid_members())
    for b, sp in f.carrier.span_items():
        cands.add(f.space.point(b, sp.lo))
        if sp.hi_in:
            cands.add(f.space.point(b, sp.hi))
    for pt in sorted(cands):
        if f.evaluate(c.add_point(pt)) == pt:
            out = out.add_point(pt)
    return out


@dataclass(frozen=True)
class DerivedSets:
    interior: Region
    bracket: Region
    boundary_point: Optional[Point]


class DerivedSetsInvariantError(AssertionError):
    """A derived-set invariant failed: defective selection or model bug."""


def derived_sets(f: Selection, v: Region) -> DerivedSets:
    """f-interior and f-closure of an open set, exactly, with invariants verified."""
    space = f.space
    if f.carrier != space.whole():
        raise ValueError("derived sets are defined for whole-space selections")
    if v.is_empty:
        raise ValueError("derived sets need a nonempty open set")
    if not v.is_open():
        raise ValueError("derived sets are taken of open sets")
    whole = space.whole()
    if v == whole:
        return DerivedSets(whole, whole, None)
    comp = whole.difference(v)
    q = f.evaluate(comp)
    bracket = bracket_of(f, comp)
    interior = bracket.remove_point(q)
    _verify(f, v, comp, q, bracket, interior)
    return DerivedSets(interior, bracket, q)


def _verify(f, v, comp, q, bracket, interior) -> None:
    problems = []
    if not bracket.is_closed():
        problems.append("bracket not closed")
    if not interior.is_open():
        problems.append("interior not open")
    if not bracket.contains_point(q):
        problems.append("boundary point outside bracket")
    inside_comp = bracket.intersect(comp)
    if inside_comp != f.space.point_region(q):
        problems.append("bracket meets the complement beyond the boundary point")
    if not interior.subset_of(v):
        problems.append("interior escapes the open set")
    if not bracket.is_open():
        status = clopen_modulo(bracket)
        if status.kind != "modulo" or status.point != q:
            problems.append("bracket not clopen modulo the boundary point")
    if problems:
        raise DerivedSetsInvariantError(
            f"derived sets of {v!r} under {f.kind}: " + "; ".join(problems)
        )


def refine_modulo(
    f: Selection, v: Region, p: Point, q: Point, assume_maximal: bool = False
) -> Region:
    """Bracket of V minus one interior point q: clopen modulo q, p kept inside."""
    if not assume_maximal and f.maximal_point() != p:
        raise ValueError(f"selection is not known to be maximal at {p}")
    if not v.contains_point(p):
        raise ValueError(f"{p} outside the open set")
    if p == q:
        raise ValueError("the removed point must differ from the kept point")
    ds = derived_sets(f, v)
    if not ds.interior.contains_point(q):
        raise ValueError(f"{q} is not in the derived interior")
    w = v.remove_point(q)
    dsw = derived_sets(f, w)
    problems = []
    if dsw.boundary_point != q:
        problems.append(f"boundary is {dsw.boundary_point}, expected {q}")
    if not dsw.interior.contains_point(p):
        problems.append(f"{p} fell out of the refined interior")
    if not dsw.bracket.subset_of(v):
        problems.append("refined bracket escapes the open set")
    if problems:
        raise DerivedSetsInvariantError("; ".join(problems))
    return dsw.bracket


@dataclass(frozen=True)
class TwoStepHint:
    """Auxiliary point-maximal selections, supplied per point on demand."""

    aux: Callable[[Point], Selection]


@dataclass(frozen=True)
class WitnessHint:
    """A clopen witness W around the obstruction, avoiding the kept point."""

    w: Region


@dataclass(frozen=True)
class CutPointHint:
    side0: Region
    side1: Region


class SeparationStuckError(RuntimeError):
    def __init__(self, stage: str, detail: str = "") -> None:
        super().__init__(f"clopen separation stuck at {stage}: {detail}")
        self.stage = stage


def clopen_separation(f: Selection, p: Point, v: Region, hint) -> Region:
    """A clopen set U with p inside U inside V, by the hinted construction."""
    space = f.space
    if not v.contains_point(p):
        raise ValueError(f"{p} outside the target open set")
    if f.maximal_point() != p:
        raise ValueError(f"selection is not maximal at {p}")
    p_reg = space.point_region(p)
    if p_reg.is_open():
        return p_reg

    if isinstance(hint, CutPointHint):
        u = _cut_point_separation(f, p, v, hint)
    elif isinstance(hint, WitnessHint):
        u = _witness_separation(f, p, v, hint)
    elif isinstance(hint, TwoStepHint):
        u = _two_step_separation(f, p, v, hint)
    else:
        raise ValueError(f"unknown separation hint {hint!r}")

    if not (u.is_clopen() and u.contains_point(p) and u.subset_of(v)):
        raise DerivedSetsInvariantError(f"separation output invalid: {u!r}")
    return u


def _pick_q(region: Region, exclude: tuple[Point, ...], stage: str) -> Point:
    q = next_point(region, exclude=exclude)
    if q is None:
        raise SeparationStuckError(stage, f"no admissible point in {region!r}")
    return q


def _first_bracket(f: Selection, p: Point, v: Region) -> tuple[Region, Point]:
    ds = derived_sets(f, v)
    q1 = _pick_q(ds.interior, (p,), "choose-q1")
    h1 = refine_modulo(f, v, p, q1)
    return h1, q1


def _two_step_separation(f, p, v, hint: TwoStepHint) -> Region:
    h1, q1 = _first_bracket(f, p, v)
    if h1.is_open():
        return h1
    f2 = hint.aux(q1)
    if f2.maximal_point() != q1:
        raise ValueError(f"auxiliary selection is not maximal at {q1}")
    v2 = v.remove_point(p)
    ds2 = derived_sets(f2, v2)
    pool = ds2.interior.intersect(v.difference(h1))
    q2 = _pick_q(pool, (q1, p), "choose-q2")
    h2 = refine_modulo(f2, v2, q1, q2)
    return h1.difference(h2)


def _witness_separation(f, p, v, hint: WitnessHint) -> Region:
    w = hint.w
    if not w.is_clopen() or w.contains_point(p):
        raise ValueError("witness must be clopen and avoid the kept point")
    h1, q1 = _first_bracket(f, p, v)
    if h1.is_open():
        return h1
    if not w.contains_point(q1):
        raise SeparationStuckError("witness", f"witness misses the boundary {q1}")
    return h1.difference(w)


def _cut_point_separation(f, p, v, hint: CutPointHint) -> Region:
    space = f.space
    ds = derived_sets(f, v)
    sides = (hint.side0, hint.side1)
    pieces = []
    for i in (0, 1):
        pool = ds.interior.intersect(sides[i].closure())
        q_i = _pick_q(pool, (p,), f"choose-q{i}")
        w_i = v.remove_point(q_i)
        h_i = derived_sets(f, w_i).bracket
        u_i = h_i.union(sides[i].closure())
        pieces.append(u_i)
    return pieces[0].intersect(pieces[1])
