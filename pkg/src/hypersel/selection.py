"""Selections on the closed sets of an amalgam space.

Primitives pick order extrema under a branch-concatenation order with a
declared per-branch orientation; combinators evaluate a fiber selection at
the extreme level met by the argument.  Every evaluation enforces the
selection law (the value belongs to the argument).  Extremality and
continuity checkers are exhaustive over their declared finite families.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

from hypersel.ordinal import Ordinal, predecessor, successor
from hypersel.space import Point, Region, Space
from hypersel.decomp import DecompositionSpec
from hypersel import hyperspace

__all__ = [
    "Selection",
    "OrderMaxSelection",
    "OrderMinSelection",
    "JoinSelection",
    "MeetSelection",
    "RestrictSelection",
    "PatchedSelection",
    "FiberSelections",
    "sel_eval",
    "join_combinator",
    "meet_combinator",
    "order_extremum",
    "default_orientations",
    "ExtremumNotAttained",
    "SelectionLawError",
    "extremality_check",
    "continuity_check",
    "CheckOutcome",
    "FamilyParams",
    "enumerate_closed_family",
]


class ExtremumNotAttained(ValueError):
    """The declared order has no extreme member on the given closed set."""


class SelectionLawError(AssertionError):
    """A selection produced a value outside its argument."""


def default_orientations(space: Space) -> tuple[bool, ...]:
    """First branch ascending, later branches descending.

    With gluings at branch tops this concatenation order has attained extrema
    on every closed set; other orientations may legitimately fail, which
    evaluation reports as ExtremumNotAttained.
    """
    return tuple(b == 0 for b in range(len(space.branches)))


def _canonical_here(space: Space, b: int, pos: Ordinal) -> bool:
    pt = space.point(b, pos)
    return pt.branch == b and pt.pos == pos


def _attained_top(space: Space, trace, b: int) -> Optional[Point]:
    """Largest position of the trace whose class is canonical at this branch."""
    for si in range(len(trace) - 1, -1, -1):
        span = trace[si]
        pos = span.hi
        while True:
            if _canonical_here(space, b, pos):
                return space.point(b, pos)
            if pos == span.lo:
                break
            if pos.is_successor:
                pos = predecessor(pos)
            else:
                raise ExtremumNotAttained(
                    f"positions below {pos} on branch {b} have no largest member"
                )
    return None


def _attained_bottom(space: Space, trace, b: int) -> Optional[Point]:
    """Smallest position of the trace whose class is canonical at this branch."""
    for span in trace:
        pos = span.lo
        while span.covers(pos):
            if _canonical_here(space, b, pos):
                return space.point(b, pos)
            pos = successor(pos)
    return None


def order_extremum(
    space: Space, orientations: Sequence[bool], s: Region, want_max: bool
) -> Point:
    """Extreme member of a closed set under the oriented concatenation order."""
    if s.is_empty:
        raise ValueError("extremum of the empty set")
    if not s.is_closed():
        raise ValueError("order extrema are taken over closed sets")
    branch_order = range(len(space.branches) - 1, -1, -1) if want_max else range(
        len(space.branches)
    )
    for b in branch_order:
        trace = s.traces[b]
        if not trace:
            continue
        asc = orientations[b]
        # on this branch the wanted key extreme sits at the large-position end
        # exactly when orientation and direction agree
        if want_max == asc:
            cand = _attained_top(space, trace, b)
        else:
            cand = _attained_bottom(space, trace, b)
        if cand is None:
            # every position here belongs to a class canonical on an earlier
            # branch; those classes carry earlier keys, keep scanning
            continue
        return cand
    raise ExtremumNotAttained("set has no member with an attained key")


class Selection:
    """Base: a total evaluable map from closed subsets of the carrier to points."""

    space: Space
    carrier: Region
    kind: str = "abstract"

    def evaluate(self, s: Region) -> Point:
        if s.space is not self.space:
            raise ValueError("argument over a different space")
        if s.is_empty:
            raise ValueError("selections act on nonempty closed sets")
        if not s.is_closed():
            raise ValueError("selections act on closed sets")
        if not s.subset_of(self.carrier):
            raise ValueError("argument escapes the selection domain")
        value = self._pick(s)
        if not s.contains_point(value):
            raise SelectionLawError(f"{self.kind} chose {value} outside {s!r}")
        return value

    def _pick(self, s: Region) -> Point:
        raise NotImplementedError

    def maximal_point(self) -> Optional[Point]:
        """Point p with f(S) = p whenever p is in S, if structurally known."""
        return None

    def minimal_point(self) -> Optional[Point]:
        """Point p with f(S) != p whenever S != {p}, if structurally known."""
        return None


class OrderMaxSelection(Selection):
    kind = "order-max"

    def __init__(
        self,
        space: Space,
        carrier: Optional[Region] = None,
        orientations: Optional[Sequence[bool]] = None,
    ) -> None:
        self.space = space
        self.carrier = carrier if carrier is not None else space.whole()
        self.orientations = (
            tuple(orientations) if orientations is not None else default_orientations(space)
        )

    def _pick(self, s: Region) -> Point:
        return order_extremum(self.space, self.orientations, s, want_max=True)

    def maximal_point(self) -> Optional[Point]:
        try:
            return order_extremum(self.space, self.orientations, self.carrier, True)
        except ExtremumNotAttained:
            return None

    def minimal_point(self) -> Optional[Point]:
        try:
            return order_extremum(self.space, self.orientations, self.carrier, False)
        except ExtremumNotAttained:
            return None


class OrderMinSelection(Selection):
    kind = "order-min"

    def __init__(
        self,
        space: Space,
        carrier: Optional[Region] = None,
        orientations: Optional[Sequence[bool]] = None,
    ) -> None:
        self.space = space
        self.carrier = carrier if carrier is not None else space.whole()
        self.orientations = (
            tuple(orientations) if orientations is not None else default_orientations(space)
        )

    def _pick(self, s: Region) -> Point:
        return order_extremum(self.space, self.orientations, s, want_max=False)

    def maximal_point(self) -> Optional[Point]:
        try:
            return order_extremum(self.space, self.orientations, self.carrier, False)
        except ExtremumNotAttained:
            return None

    def minimal_point(self) -> Optional[Point]:
        try:
            return order_extremum(self.space, self.orientations, self.carrier, True)
        except ExtremumNotAttained:
            return None


class FiberSelections:
    """One selection per decomposition level, built on demand and memoized."""

    def __init__(
        self,
        decomp: DecompositionSpec,
        factory: Callable[[Ordinal, Region], Selection],
        overrides: Optional[dict[Ordinal, Selection]] = None,
    ) -> None:
        self.decomp = decomp
        self.factory = factory
        self.overrides = dict(overrides or {})
        self._memo: dict[Ordinal, Selection] = {}

    def get(self, idx: Ordinal) -> Selection:
        if idx in self.overrides:
            return self.overrides[idx]
        sel = self._memo.get(idx)
        if sel is None:
            sel = self.factory(idx, self.decomp.fiber(idx))
            self._memo[idx] = sel
        return sel


def _default_fiber_factory(space: Space) -> Callable[[Ordinal, Region], Selection]:
    return lambda idx, fib: OrderMaxSelection(space, carrier=fib)


class JoinSelection(Selection):
    """Evaluate the fiber selection at the highest level met by the argument."""

    kind = "join"

    def __init__(
        self,
        decomp: DecompositionSpec,
        fibers: FiberSelections,
        continuity_theorem_applicable: Optional[bool] = None,
    ) -> None:
        self.decomp = decomp
        self.space = decomp.space
        self.carrier = decomp.carrier
        self.fibers = fibers
        self.continuity_theorem_applicable = continuity_theorem_applicable

    def _pick(self, s: Region) -> Point:
        _, hi = self.decomp.eta_extremes(s)
        g = self.fibers.get(hi)
        return g.evaluate(s.intersect(self.decomp.fiber(hi)))

    def maximal_point(self) -> Optional[Point]:
        top = self.decomp.fiber(self.decomp.gamma)
        pts = {self.space.point(b, sp.lo) for b, sp in top.span_items()}
        if len(pts) == 1:
            p = pts.pop()
            if top == self.space.point_region(p):
                return p
        return None


class MeetSelection(Selection):
    """Evaluate the fiber selection at the lowest level met by the argument."""

    kind = "meet"

    def __init__(
        self,
        decomp: DecompositionSpec,
        fibers: FiberSelections,
        continuity_theorem_applicable: Optional[bool] = None,
    ) -> None:
        self.decomp = decomp
        self.space = decomp.space
        self.carrier = decomp.carrier
        self.fibers = fibers
        self.continuity_theorem_applicable = continuity_theorem_applicable

    def _pick(self, s: Region) -> Point:
        lo, _ = self.decomp.eta_extremes(s)
        g = self.fibers.get(lo)
        return g.evaluate(s.intersect(self.decomp.fiber(lo)))

    def minimal_point(self) -> Optional[Point]:
        top = self.decomp.fiber(self.decomp.gamma)
        pts = {self.space.point(b, sp.lo) for b, sp in top.span_items()}
        if len(pts) == 1:
            p = pts.pop()
            if top == self.space.point_region(p):
                return p
        return None


class RestrictSelection(Selection):
    kind = "restrict"

    def __init__(self, parent: Selection, carrier: Region) -> None:
        if not carrier.subset_of(parent.carrier):
            raise ValueError("restriction outside the parent domain")
        self.parent = parent
        self.space = parent.space
        self.carrier = carrier

    def _pick(self, s: Region) -> Point:
        return self.parent.evaluate(s)

    def maximal_point(self) -> Optional[Point]:
        p = self.parent.maximal_point()
        if p is not None and self.carrier.contains_point(p):
            return p
        return None


class PatchedSelection(Selection):
    """Parent selection redirected on one closed set; a continuity-defect fixture."""

    kind = "patched"

    def __init__(self, parent: Selection, at: Region, value: Point) -> None:
        if at.is_empty or not at.is_closed():
            raise ValueError("patch target must be a nonempty closed set")
        if not at.contains_point(value):
            raise ValueError("patched value must satisfy the selection law")
        self.parent = parent
        self.space = parent.space
        self.carrier = parent.carrier
        self.at = at
        self.value = value

    def _pick(self, s: Region) -> Point:
        if s == self.at:
            return self.value
        return self.parent._pick(s)


def sel_eval(f: Selection, s: Region) -> Point:
    return f.evaluate(s)


def _limit_fiber_hypothesis(
    decomp: DecompositionSpec,
    fibers: FiberSelections,
    want: str,
    family: Optional["FamilyParams"],
) -> bool:
    """Each limit-level fiber selection is extreme at the fiber's modulo point."""
    space = decomp.space
    for lam in decomp.limit_indices():
        fib = decomp.fiber(lam)
        q = decomp.limit_modulo_point(lam)
        g = fibers.get(lam)
        if fib == space.point_region(q):
            continue  # singleton fiber: both hypotheses hold vacuously
        params = family or FamilyParams(grid_k=2, max_intervals=1)
        out = extremality_check(g, q, want, params)
        if not out.passed:
            return False
    return True


def join_combinator(
    decomp: DecompositionSpec,
    fibers: Optional[FiberSelections] = None,
    check_hypotheses: bool = True,
    family: Optional["FamilyParams"] = None,
) -> JoinSelection:
    if decomp.kind != "ordinal":
        raise ValueError("join needs an ordinal decomposition")
    fibers = fibers or FiberSelections(decomp, _default_fiber_factory(decomp.space))
    flag = (
        _limit_fiber_hypothesis(decomp, fibers, "minimal", family)
        if check_hypotheses
        else None
    )
    return JoinSelection(decomp, fibers, continuity_theorem_applicable=flag)


def meet_combinator(
    decomp: DecompositionSpec,
    fibers: Optional[FiberSelections] = None,
    check_hypotheses: bool = True,
    family: Optional["FamilyParams"] = None,
) -> MeetSelection:
    if decomp.kind not in ("ordinal", "quasi"):
        raise ValueError("meet needs a quasi-ordinal decomposition")
    fibers = fibers or FiberSelections(decomp, _default_fiber_factory(decomp.space))
    flag = (
        _limit_fiber_hypothesis(decomp, fibers, "maximal", family)
        if check_hypotheses
        else None
    )
    return MeetSelection(decomp, fibers, continuity_theorem_applicable=flag)


# -- exhaustive checking -----------------------------------------------------


@dataclass(frozen=True)
class FamilyParams:
    """Enumeration bounds: endpoints from the k-grid, at most this many
    intervals per branch."""

    grid_k: int = 4
    max_intervals: int = 2


def enumerate_closed_family(
    space: Space,
    params: FamilyParams = FamilyParams(),
    carrier: Optional[Region] = None,
) -> list[Region]:
    """All nonempty closed sets with grid endpoints and bounded interval count,
    deterministic order, duplicates (via gluing saturation) removed."""
    base = carrier if carrier is not None else space.whole()
    per_branch: list[list[tuple]] = []
    for b in range(len(space.branches)):
        cands = set(space.grid_positions(b, params.grid_k))
        for sp in base.traces[b]:
            cands.add(sp.lo)
            cands.add(sp.hi)
        pts = sorted(
            (g for g in cands if base.covers_position(b, g)), key=lambda o: o.terms
        )
        intervals = []
        for i, lo in enumerate(pts):
            for hi in pts[i:]:
                seg = Region.from_intervals(space, [(b, lo, hi)])
                if seg.subset_of(base):
                    intervals.append((lo, hi))
        options: list[tuple] = [()]
        options.extend((iv,) for iv in intervals)
        if params.max_intervals >= 2:
            for (a1, b1), (a2, b2) in combinations(intervals, 2):
                if a2 > successor(b1):
                    options.append(((a1, b1), (a2, b2)))
        per_branch.append(options)
    out: list[Region] = []
    seen: set = set()

    def rec(b: int, acc: list):
        if b == len(per_branch):
            spans = [
                (bb, lo, hi, True) for bb, ivs in enumerate(acc) for (lo, hi) in ivs
            ]
            if not spans:
                return
            reg = Region.make(space, spans)
            if reg not in seen:
                seen.add(reg)
                out.append(reg)
            return
        for choice in per_branch[b]:
            acc.append(choice)
            rec(b + 1, acc)
            acc.pop()

    rec(0, [])
    return out


@dataclass(frozen=True)
class CheckOutcome:
    passed: bool
    witness: Optional[object] = None
    detail: str = ""
    checked: int = 0


def extremality_check(
    f: Selection,
    p: Point,
    mode: str,
    family: FamilyParams | Iterable[Region] = FamilyParams(),
) -> CheckOutcome:
    """Exhaustive extremality test over the enumerated family.

    maximal: f(S) = p whenever p is in S; minimal: f(S) != p whenever S != {p}.
    """
    if mode not in ("maximal", "minimal"):
        raise ValueError(f"unknown extremality mode {mode!r}")
    space = f.space
    sets = (
        enumerate_closed_family(space, family, carrier=f.carrier)
        if isinstance(family, FamilyParams)
        else list(family)
    )
    p_region = space.point_region(p)
    checked = 0
    for s in sets:
        checked += 1
        if mode == "maximal":
            if s.contains_point(p) and f.evaluate(s) != p:
                return CheckOutcome(False, s, f"f(S) != {p} though {p} in S", checked)
        else:
            if s != p_region and f.evaluate(s) == p:
                return CheckOutcome(False, s, f"f(S) = {p} though S != {{{p}}}", checked)
    return CheckOutcome(True, None, "", checked)


def continuity_check(
    f: Selection,
    nets: Sequence[hyperspace.ConvergentNet],
    depth: int = 2,
) -> CheckOutcome:
    """Eventual entry of selected values into every canonical open around the
    value at the limit, for each net; nets must converge to their declared limits."""
    space = f.space
    checked = 0
    for net in nets:
        conv = hyperspace.net_convergence_check(net, depth)
        if not conv.passed:
            raise ValueError(f"net {net.name} fails its own convergence check")
        y = f.evaluate(net.declared_limit)
        end_value = f.evaluate(net.member(net.window))
        for level in range(depth):
            around = space.open_tail(y, level)
            checked += 1
            if not around.contains_point(end_value):
                return CheckOutcome(
                    False,
                    (net.name, around),
                    f"values of {net.name} stay outside a canonical open around {y}",
                    checked,
                )
    return CheckOutcome(True, None, "", checked)
