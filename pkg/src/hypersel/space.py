"""Amalgam spaces and their exact set algebra.

A space is a finite disjoint sum of compact ordinal branches [0, top_i]
with finitely many point identifications (gluings).  Sets are represented
per branch as normalized finite unions of spans [lo, hi] or [lo, hi) — the
half-open form only with a limit right end — and are kept saturated: if any
coordinate of a glued class is covered, all its coordinates are.  Under this
convention every all-attained region is closed in the quotient, and openness
is decidable from span left ends alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

from hypersel.ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    fund_index_at_least,
    limit_part,
    omega_power,
    ord_fundamental,
    predecessor,
    successor,
)

__all__ = [
    "Span",
    "Point",
    "Space",
    "Region",
    "ClosedSet",
    "OpenSet",
    "closed_set",
    "open_set",
    "cs_algebra",
    "complement_closure",
    "is_open",
    "clopen_modulo",
    "ClopenStatus",
    "character",
    "CharacterInfo",
    "SpaceMismatchError",
]


class SpaceMismatchError(ValueError):
    """Two set values over different spaces were combined."""


class Span(NamedTuple):
    """One interval of a branch trace; hi_in=False only with a limit hi."""

    lo: Ordinal
    hi: Ordinal
    hi_in: bool

    def covers(self, x: Ordinal) -> bool:
        if x < self.lo:
            return False
        return x < self.hi or (x == self.hi and self.hi_in)

    @property
    def cover_end(self) -> tuple[Ordinal, bool]:
        return (self.hi, self.hi_in)


@dataclass(frozen=True, slots=True)
class Point:
    """A point of the quotient, held at the least coordinate of its class."""

    branch: int
    pos: Ordinal

    def __lt__(self, other: "Point") -> bool:
        return (self.branch, self.pos.terms) < (other.branch, other.pos.terms)

    def __str__(self) -> str:
        return f"({self.branch}:{self.pos})"


class Space:
    """Finite amalgam of compact ordinal branches.

    Identity semantics: set values belong to one Space instance and may only
    be combined with values over the same instance.
    """

    def __init__(
        self,
        branches: Sequence[Ordinal],
        gluings: Sequence[Sequence[tuple[int, Ordinal]]] = (),
        grid_k: int = 10,
    ) -> None:
        self.branches = tuple(branches)
        if not self.branches:
            raise ValueError("a space needs at least one branch")
        classes = []
        seen: set[tuple[int, Ordinal]] = set()
        for cls in gluings:
            coords = tuple(sorted(((b, p) for b, p in cls), key=lambda c: (c[0], c[1].terms)))
            if len(coords) < 2:
                raise ValueError("a gluing class needs at least two coordinates")
            for b, p in coords:
                if not (0 <= b < len(self.branches)):
                    raise ValueError(f"gluing branch {b} out of range")
                if p > self.branches[b]:
                    raise ValueError(f"gluing position {p} beyond branch top")
                if (b, p) in seen:
                    raise ValueError(f"coordinate {(b, p)} appears in two gluing classes")
                seen.add((b, p))
            classes.append(coords)
        self.gluings = tuple(classes)
        self.grid_k = grid_k
        self._coord_class: dict[tuple[int, Ordinal], tuple[tuple[int, Ordinal], ...]] = {}
        for coords in self.gluings:
            for c in coords:
                self._coord_class[c] = coords
        self._grid_cache: dict[tuple[int, int], tuple[Ordinal, ...]] = {}

    # -- points ------------------------------------------------------------

    def class_coords(self, branch: int, pos: Ordinal) -> tuple[tuple[int, Ordinal], ...]:
        return self._coord_class.get((branch, pos), ((branch, pos),))

    def point(self, branch: int, pos: Ordinal) -> Point:
        if pos > self.branches[branch]:
            raise ValueError(f"position {pos} beyond branch {branch} top")
        b, p = self.class_coords(branch, pos)[0]
        return Point(b, p)

    def point_coords(self, pt: Point) -> tuple[tuple[int, Ordinal], ...]:
        return self.class_coords(pt.branch, pt.pos)

    def point_region(self, pt: Point) -> "Region":
        return Region.make(self, [(b, p, p, True) for b, p in self.point_coords(pt)])

    # -- grids ---------------------------------------------------------------

    def _prefixes(self, o: Ordinal) -> set[Ordinal]:
        out = {ZERO}
        head: list[tuple[int, int]] = []
        for e, c in o.terms:
            if e == 0:
                break
            for cc in range(1, c + 1):
                out.add(Ordinal(tuple(head) + ((e, cc),)))
            head.append((e, c))
        out.add(limit_part(o))
        return out

    def grid_bases(self, branch: int, k: Optional[int] = None) -> list[Ordinal]:
        """Limit-or-zero base points whose +j offsets make up the branch grid."""
        k = self.grid_k if k is None else k
        top = self.branches[branch]
        bases = self._prefixes(top)
        for coords in self.gluings:
            for b, p in coords:
                if b == branch:
                    bases |= self._prefixes(p)
        maxe = top.degree
        if maxe >= 1:
            combos = [ZERO]
            for e in range(maxe, 0, -1):
                combos = [
                    base + omega_power(e, c) if c else base
                    for base in combos
                    for c in range(0, k + 1)
                ]
            bases |= {b for b in combos if b <= top}
        return sorted((b for b in bases if b <= top), key=lambda o: o.terms)

    def grid_positions(self, branch: int, k: Optional[int] = None) -> tuple[Ordinal, ...]:
        k = self.grid_k if k is None else k
        key = (branch, k)
        cached = self._grid_cache.get(key)
        if cached is not None:
            return cached
        top = self.branches[branch]
        pts: set[Ordinal] = set()
        for base in self.grid_bases(branch, k):
            for j in range(k + 1):
                cand = base + Ordinal.from_int(j)
                if cand <= top:
                    pts.add(cand)
        for coords in self.gluings:
            for b, p in coords:
                if b == branch:
                    pts.add(p)
        pts.add(top)
        out = tuple(sorted(pts, key=lambda o: o.terms))
        self._grid_cache[key] = out
        return out

    def grid_points(self, k: Optional[int] = None) -> list[Point]:
        seen = set()
        out = []
        for b in range(len(self.branches)):
            for pos in self.grid_positions(b, k):
                pt = self.point(b, pos)
                if pt not in seen:
                    seen.add(pt)
                    out.append(pt)
        out.sort()
        return out

    # -- canonical approach ladders ---------------------------------------

    def approach(self, branch: int, beta: Ordinal, level: int) -> Ordinal:
        """Strictly increasing positions below the limit beta, grid first.

        Level 0 is the largest grid position below beta; deeper levels climb
        the fundamental sequence of beta past the grid.
        """
        if not beta.is_limit:
            raise ValueError(f"{beta} is not a limit position")
        below = [g for g in self.grid_positions(branch) if g < beta]
        gmax = below[-1]
        if level == 0:
            return gmax
        m0 = fund_index_at_least(beta, successor(gmax))
        cand = ord_fundamental(beta, m0 + level - 1)
        if cand <= gmax:
            cand = ord_fundamental(beta, m0 + level)
        return cand

    def open_tail(self, pt: Point, level: int) -> "Region":
        """Canonical basic open neighbourhood of pt at the given refinement level."""
        spans = []
        for b, beta in self.point_coords(pt):
            if beta.is_limit:
                spans.append((b, successor(self.approach(b, beta, level)), beta, True))
            else:
                spans.append((b, beta, beta, True))
        reg = Region.make(self, spans)
        if not reg.is_open():
            raise ValueError(f"no open canonical tail at {pt} (gluing interferes)")
        return reg

    def whole(self) -> "Region":
        return Region.make(
            self, [(b, ZERO, top, True) for b, top in enumerate(self.branches)]
        )

    def empty(self) -> "Region":
        return Region.make(self, [])

    def __repr__(self) -> str:
        return f"Space(branches={[str(b) for b in self.branches]}, gluings={len(self.gluings)})"


_END_KEY = lambda e: (e[0].terms, e[1])  # cover-end order: position, then closed beats open


def _span_minus(p: Span, t: Span) -> list[Span]:
    """Pieces of span p not covered by span t (possibly degenerate; normalize prunes)."""
    out = []
    if p.lo < t.lo:
        end = min(p.cover_end, (t.lo, False), key=_END_KEY)
        out.append(Span(p.lo, end[0], end[1]))
    start = successor(t.hi) if t.hi_in else t.hi
    if start < p.lo:
        start = p.lo
    if start <= p.hi:
        out.append(Span(start, p.hi, p.hi_in))
    return out


def _normalize(spans: list[Span]) -> tuple[Span, ...]:
    cleaned = []
    for s in spans:
        lo, hi, hi_in = s
        if not hi_in:
            if hi <= lo:
                continue
            if hi.is_successor:
                hi, hi_in = predecessor(hi), True
        if lo > hi:
            continue
        cleaned.append(Span(lo, hi, hi_in))
    cleaned.sort(key=lambda s: (s.lo.terms, s.hi.terms, s.hi_in))
    out: list[Span] = []
    for s in cleaned:
        if out:
            prev = out[-1]
            touch = successor(prev.hi) if prev.hi_in else prev.hi
            if s.lo <= touch:
                end = max(prev.cover_end, s.cover_end, key=lambda e: (e[0].terms, e[1]))
                out[-1] = Span(prev.lo, end[0], end[1])
                continue
        out.append(s)
    return tuple(out)


class Region:
    """A finitary point set of the quotient: normalized saturated branch traces."""

    __slots__ = ("space", "traces", "_hash")

    def __init__(self, space: Space, traces: tuple[tuple[Span, ...], ...]):
        self.space = space
        self.traces = traces
        self._hash = hash(traces)

    @staticmethod
    def make(space: Space, spans: Iterable[tuple[int, Ordinal, Ordinal, bool]]) -> "Region":
        per_branch: list[list[Span]] = [[] for _ in space.branches]
        for b, lo, hi, hi_in in spans:
            if hi > space.branches[b]:
                raise ValueError(f"span [{lo},{hi}] beyond branch {b} top")
            per_branch[b].append(Span(lo, hi, hi_in))
        traces = [_normalize(tr) for tr in per_branch]
        # saturate: a covered coordinate pulls in its whole gluing class
        extra: list[tuple[int, Ordinal]] = []
        for coords in space.gluings:
            if any(any(s.covers(p) for s in traces[b]) for b, p in coords):
                extra.extend(
                    (b, p)
                    for b, p in coords
                    if not any(s.covers(p) for s in traces[b])
                )
        if extra:
            for b, p in extra:
                per_branch[b].append(Span(p, p, True))
            traces = [_normalize(tr) for tr in per_branch]
        return Region(space, tuple(traces))

    @staticmethod
    def from_intervals(
        space: Space, items: Iterable[tuple[int, Ordinal, Ordinal]]
    ) -> "Region":
        return Region.make(space, [(b, lo, hi, True) for b, lo, hi in items])

    # -- structure ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Region)
            and other.space is self.space
            and other.traces == self.traces
        )

    def __hash__(self) -> int:
        return self._hash

    @property
    def is_empty(self) -> bool:
        return not any(self.traces)

    def covers_position(self, branch: int, pos: Ordinal) -> bool:
        return any(s.covers(pos) for s in self.traces[branch])

    def contains_point(self, pt: Point) -> bool:
        return any(
            self.covers_position(b, p) for b, p in self.space.point_coords(pt)
        )

    def span_items(self) -> Iterable[tuple[int, Span]]:
        for b, tr in enumerate(self.traces):
            for s in tr:
                yield b, s

    def _check_space(self, other: "Region") -> None:
        if other.space is not self.space:
            raise SpaceMismatchError("set values over different spaces")

    # -- algebra --------------------------------------------------------------

    def union(self, other: "Region") -> "Region":
        self._check_space(other)
        return Region.make(
            self.space,
            [(b, s.lo, s.hi, s.hi_in) for b, s in self.span_items()]
            + [(b, s.lo, s.hi, s.hi_in) for b, s in other.span_items()],
        )

    def intersect(self, other: "Region") -> "Region":
        self._check_space(other)
        spans = []
        for b in range(len(self.traces)):
            for s in self.traces[b]:
                for t in other.traces[b]:
                    lo = max(s.lo, t.lo)
                    end = min(s.cover_end, t.cover_end, key=lambda e: (e[0].terms, e[1]))
                    if lo < end[0] or (lo == end[0] and end[1]):
                        spans.append((b, lo, end[0], end[1]))
        return Region.make(self.space, spans)

    def difference(self, other: "Region") -> "Region":
        self._check_space(other)
        spans = []
        for b in range(len(self.traces)):
            for s in self.traces[b]:
                pieces = [s]
                for t in other.traces[b]:
                    nxt: list[Span] = []
                    for p in pieces:
                        for q in _span_minus(p, t):
                            nxt.append(q)
                    pieces = nxt
                    if not pieces:
                        break
                for q in pieces:
                    spans.append((b, q.lo, q.hi, q.hi_in))
        return Region.make(self.space, spans)

    def closure(self) -> "Region":
        return Region.make(
            self.space, [(b, s.lo, s.hi, True) for b, s in self.span_items()]
        )

    def complement(self, within: Optional["Region"] = None) -> "Region":
        base = within if within is not None else self.space.whole()
        return base.difference(self)

    def subset_of(self, other: "Region") -> bool:
        return self.difference(other).is_empty

    def add_point(self, pt: Point) -> "Region":
        return self.union(self.space.point_region(pt))

    def remove_point(self, pt: Point) -> "Region":
        return self.difference(self.space.point_region(pt))

    # -- topology ----------------------------------------------------------

    def is_closed(self) -> bool:
        return all(s.hi_in for _, s in self.span_items())

    def is_open(self) -> bool:
        """Exact openness in the quotient: every span left end is 0 or a successor."""
        for _, s in self.span_items():
            if s.lo.is_limit:
                return False
        return True

    def is_clopen(self) -> bool:
        return self.is_closed() and self.is_open()

    def grid_members(self, k: Optional[int] = None) -> list[Point]:
        return [p for p in self.space.grid_points(k) if self.contains_point(p)]

    def min_point(self) -> Point:
        """Least member in the (branch, position) order."""
        for b, tr in enumerate(self.traces):
            if tr:
                return self.space.point(b, tr[0].lo)
        raise ValueError("empty region has no least member")

    def __repr__(self) -> str:
        parts = []
        for b, s in self.span_items():
            if s.lo == s.hi:
                parts.append(f"{b}:{{{s.lo}}}")
            else:
                parts.append(f"{b}:[{s.lo},{s.hi}{']' if s.hi_in else ')'}")
        return "Region(" + " ".join(parts) + ")" if parts else "Region(empty)"


ClosedSet = Region
OpenSet = Region


def closed_set(space: Space, items: Iterable[tuple[int, Ordinal, Ordinal]]) -> Region:
    reg = Region.from_intervals(space, items)
    if reg.is_empty:
        raise ValueError("closed sets are nonempty")
    return reg


def open_set(space: Space, items: Iterable[tuple[int, Ordinal, Ordinal]]) -> Region:
    reg = Region.from_intervals(space, items)
    if not reg.is_open():
        raise ValueError(f"{reg!r} does not denote an open set")
    return reg


# -- closed-set operations ----------------------------------------------------


def cs_algebra(op: str, a: Region, b: Region) -> Optional[Region]:
    """Union / Intersect / DiffClosure on closed sets.

    Intersect and DiffClosure return None when the result is empty; closed
    sets proper are always nonempty.
    """
    if op == "union":
        return a.union(b)
    if op == "intersect":
        out = a.intersect(b)
        return None if out.is_empty else out
    if op == "diff_closure":
        out = a.difference(b).closure()
        return None if out.is_empty else out
    raise ValueError(f"unknown closed-set operation {op!r}")


def complement_closure(h: Region) -> Region:
    """Closure of the complement of h; h must not be the whole space."""
    comp = h.complement()
    if comp.is_empty:
        raise ValueError("complement of the whole space is empty")
    return comp.closure()


def is_open(a: Region) -> bool:
    return a.is_open()


@dataclass(frozen=True)
class ClopenStatus:
    kind: str  # 'clopen' | 'modulo' | 'not_in_delta'
    point: Optional[Point]
    delta_omega: bool

    @property
    def in_delta(self) -> bool:
        return self.kind != "not_in_delta"


def clopen_modulo(h: Region) -> ClopenStatus:
    """Classify a nonempty closed set: clopen, clopen modulo one point, or neither."""
    if h.is_empty:
        raise ValueError("classification needs a nonempty closed set")
    bad = [
        (b, s.lo)
        for b, s in h.span_items()
        if s.lo.is_limit
    ]
    if not bad:
        return ClopenStatus("clopen", None, True)
    candidates = {h.space.point(b, pos) for b, pos in bad}
    if len(candidates) == 1:
        p = candidates.pop()
        if h.remove_point(p).is_open():
            info = character(h.space, p, h)
            return ClopenStatus("modulo", p, info.chi <= OMEGA)
    return ClopenStatus("not_in_delta", None, False)


@dataclass(frozen=True)
class CharacterInfo:
    chi: Ordinal
    psi: Ordinal
    base: Callable[[int], Region]
    isolated: bool


def character(space: Space, p: Point, within: Optional[Region] = None) -> CharacterInfo:
    """Character and pseudocharacter of p (in a closed subspace if given).

    Both are 1 at relatively isolated points and omega otherwise, with a
    canonical decreasing relatively clopen base generator.
    """
    carrier = within if within is not None else space.whole()
    if not carrier.contains_point(p):
        raise ValueError(f"{p} lies outside the subspace")
    accumulated = False
    for b, beta in space.point_coords(p):
        if not beta.is_limit:
            continue
        for s in carrier.traces[b]:
            if s.lo < beta and (s.hi > beta or s.hi == beta):
                accumulated = True
                break
        if accumulated:
            break
    if not accumulated:
        pt_reg = space.point_region(p)

        def base_iso(_n: int, reg: Region = pt_reg) -> Region:
            return reg

        return CharacterInfo(ONE, ONE, base_iso, True)

    def base_gen(n: int) -> Region:
        return space.open_tail(p, n).intersect(carrier)

    return CharacterInfo(OMEGA, OMEGA, base_gen, False)


def rel_open(a: Region, carrier: Region) -> bool:
    """Relative openness of a inside the closed subspace carrier."""
    if not a.subset_of(carrier):
        raise ValueError("set is not contained in the subspace")
    return carrier.difference(a).closure().intersect(a).is_empty


def rel_clopen(a: Region, carrier: Region) -> bool:
    return a.is_closed() and rel_open(a, carrier)


def next_point(
    region: Region, exclude: tuple[Point, ...] = (), prefer_successor: bool = True
) -> Optional[Point]:
    """Deterministic point choice: smallest successor-position member first."""
    space = region.space
    succ_cands: list[Point] = []
    any_cands: list[Point] = []
    for b, s in region.span_items():
        pos = s.lo
        for _ in range(4):
            if not s.covers(pos):
                break
            pt = space.point(b, pos)
            if pt not in exclude:
                any_cands.append(pt)
                if pos.is_successor:
                    succ_cands.append(pt)
            pos = successor(pos)
    pool = succ_cands if (prefer_successor and succ_cands) else any_cands
    return min(pool) if pool else None
