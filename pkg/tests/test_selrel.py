import pytest

from hypersel.ordinal import OMEGA, ZERO, Ordinal, parse_ordinal
from hypersel.space import Region, Space, clopen_modulo
from hypersel.decomp import point_decomposition
from hypersel.selection import (
    FamilyParams,
    OrderMaxSelection,
    PatchedSelection,
)
from hypersel.basebuilder import decomp_to_extreme_selection, maximal_at
from hypersel.selrel import (
    CutPointHint,
    DerivedSetsInvariantError,
    SelRel,
    SeparationStuckError,
    TwoStepHint,
    WitnessHint,
    bracket_of,
    clopen_separation,
    derived_sets,
    refine_modulo,
    sel_rel,
)
from oracles import pointwise_bracket_members

O = Ordinal.from_int
P = parse_ordinal
W = OMEGA
W2 = P("w*2")


def creg(space, *items):
    return Region.from_intervals(space, list(items))


@pytest.fixture(scope="module")
def line():
    return Space([W])


@pytest.fixture(scope="module")
def fmax(line):
    return OrderMaxSelection(line)


@pytest.fixture(scope="module")
def jmax(line):
    top = line.point(0, W)
    return decomp_to_extreme_selection(
        point_decomposition(line, top), top, "maximal", FamilyParams(grid_k=4)
    )


class TestRelation:
    def test_top_strictly_related(self, line, fmax):
        a = creg(line, (0, ZERO, O(3)))
        assert sel_rel(fmax, line.point(0, W), a) == SelRel.STRICTLY_RELATED

    def test_dominated_point_not_related(self, line, fmax):
        a = creg(line, (0, ZERO, O(3)))
        assert sel_rel(fmax, line.point(0, O(2)), a) == SelRel.NOT_RELATED

    def test_member_maximum_related_not_strictly(self, line, fmax):
        a = creg(line, (0, ZERO, O(3)))
        assert sel_rel(fmax, line.point(0, O(3)), a) == SelRel.RELATED


class TestDerivedSets:
    def test_tail_open(self, line, fmax):
        v = Region.make(line, [(0, O(6), W, True)])  # (5, w]
        ds = derived_sets(fmax, v)
        assert ds.boundary_point == line.point(0, O(5))
        assert ds.bracket == creg(line, (0, O(5), W))
        assert ds.interior == creg(line, (0, O(6), W))

    def test_initial_open(self, line, fmax):
        v = creg(line, (0, ZERO, O(5)))
        ds = derived_sets(fmax, v)
        assert ds.boundary_point == line.point(0, W)
        assert ds.bracket == creg(line, (0, W, W))
        assert ds.interior.is_empty

    def test_whole_space(self, line, fmax):
        ds = derived_sets(fmax, line.whole())
        assert ds.interior == line.whole() and ds.bracket == line.whole()
        assert ds.boundary_point is None

    def test_agrees_with_pointwise_oracle(self, line, jmax):
        for v in [
            Region.make(line, [(0, O(4), W, True)]),
            creg(line, (0, ZERO, O(2)), (0, O(6), O(9))),
            Region.make(line, [(0, O(1), O(3), True), (0, O(8), W, True)]),
        ]:
            comp = line.whole().difference(v)
            ds = derived_sets(jmax, v)
            expected = pointwise_bracket_members(jmax, comp)
            got = {p for p in line.grid_points() if ds.bracket.contains_point(p)}
            assert got == expected

    def test_invariants_hold_for_maximal_on_wedge(self, wedge_space, wedge_maximal):
        hub = wedge_space.point(0, W)
        v = wedge_space.open_tail(hub, 0)
        ds = derived_sets(wedge_maximal, v)
        assert ds.interior.contains_point(hub)
        assert ds.bracket.subset_of(v.union(wedge_space.point_region(ds.boundary_point)))
        status = clopen_modulo(ds.bracket)
        assert status.kind == "clopen" or status.point == ds.boundary_point

    def test_requires_open_input(self, line, fmax):
        with pytest.raises(ValueError):
            derived_sets(fmax, creg(line, (0, W, W)))

    def test_patched_near_patch_breaks_invariants(self, line, jmax):
        # redirecting the choice on [0,5] | {w} knocks w out of the bracket of
        # (5, w], leaving a non-closed bracket; the verifier must object
        at = creg(line, (0, ZERO, O(5)), (0, W, W))
        broken = PatchedSelection(jmax, at, line.point(0, O(5)))
        v = line.whole().difference(creg(line, (0, ZERO, O(5))))
        with pytest.raises(DerivedSetsInvariantError):
            derived_sets(broken, v)


class TestBracketRecursion:
    def test_join_bracket_is_upper_key_ray(self, line, jmax):
        comp = creg(line, (0, ZERO, O(5)))
        assert bracket_of(jmax, comp) == creg(line, (0, O(5), W))

    def test_patched_bracket_adjusts_single_point(self, line, jmax):
        comp = creg(line, (0, ZERO, O(5)))
        at = creg(line, (0, ZERO, O(5)), (0, O(9), O(9)))
        patched = PatchedSelection(jmax, at, line.point(0, O(9)))
        br = bracket_of(patched, comp)
        assert br.contains_point(line.point(0, O(9)))
        expected = pointwise_bracket_members(patched, comp)
        got = {p for p in line.grid_points() if br.contains_point(p)}
        assert got == expected


class TestRefineModulo:
    def test_example_on_tail(self, line, jmax):
        top = line.point(0, W)
        v = Region.make(line, [(0, O(4), W, True)])  # (3, w]
        q = line.point(0, O(5))
        out = refine_modulo(jmax, v, top, q)
        assert out == creg(line, (0, O(5), W))
        # clopen modulo q in the defining sense; here in fact clopen outright
        assert out.remove_point(q).is_open()
        assert clopen_modulo(out).kind in ("clopen", "modulo")

    def test_isolated_removal_keeps_clopen(self, line, jmax):
        top = line.point(0, W)
        v = line.whole()
        out = refine_modulo(jmax, v, top, line.point(0, O(1)))
        assert out.subset_of(v)
        assert out.contains_point(top)
        assert out.is_clopen()

    def test_rejects_interior_miss(self, line, jmax):
        top = line.point(0, W)
        v = Region.make(line, [(0, O(4), W, True)])
        with pytest.raises(ValueError):
            refine_modulo(jmax, v, top, line.point(0, O(2)))

    def test_rejects_non_maximal_parent(self, line, fmax):
        v = Region.make(line, [(0, O(4), W, True)])
        with pytest.raises(ValueError):
            refine_modulo(fmax, v, line.point(0, O(9)), line.point(0, O(5)))


class TestClopenSeparation:
    def test_tail_two_step(self, line, jmax):
        top = line.point(0, W)
        v = Region.make(line, [(0, O(4), W, True)])
        u = clopen_separation(jmax, top, v, TwoStepHint(lambda q: maximal_at(line, q)))
        assert u.is_clopen() and u.contains_point(top) and u.subset_of(v)

    def test_isolated_point(self, omega2_space):
        p = omega2_space.point(0, O(5))
        f = decomp_to_extreme_selection(
            point_decomposition(omega2_space, p), p, "maximal", FamilyParams(grid_k=3)
        )
        u = clopen_separation(
            f, p, omega2_space.whole(), TwoStepHint(lambda q: maximal_at(omega2_space, q))
        )
        assert u == omega2_space.point_region(p)

    def test_witness_hint(self, omega2_space):
        top = omega2_space.point(0, W2)
        f = decomp_to_extreme_selection(
            point_decomposition(omega2_space, top), top, "maximal", FamilyParams(grid_k=3)
        )
        v = Region.make(omega2_space, [(0, O(1), W2, True)])
        ds = derived_sets(f, v)
        q1 = None
        from hypersel.space import next_point

        q1 = next_point(ds.interior, exclude=(top,))
        w = Region.from_intervals(omega2_space, [(0, q1.pos, q1.pos)])
        assert w.is_clopen()
        u = clopen_separation(f, top, v, WitnessHint(w))
        assert u.is_clopen() and u.contains_point(top) and u.subset_of(v)

    def test_cut_point_recipe_on_wedge(self, wedge_space, wedge_maximal):
        hub = wedge_space.point(0, W)
        side0 = Region.make(wedge_space, [(0, ZERO, W, False)])
        side1 = Region.make(wedge_space, [(1, ZERO, W, False)])
        u = clopen_separation(
            wedge_maximal, hub, wedge_space.whole(), CutPointHint(side0, side1)
        )
        assert u.is_clopen() and u.contains_point(hub)

    def test_two_step_engages_on_limit_boundary(self, omega2_space, monkeypatch):
        # bias the first pick toward the interior limit point so the first
        # bracket is [w, w*2], genuinely non-clopen, forcing the second step
        import hypersel.selrel as selrel_mod
        from hypersel.space import next_point as real_next_point

        top = omega2_space.point(0, W2)
        limit_pt = omega2_space.point(0, W)
        f = decomp_to_extreme_selection(
            point_decomposition(omega2_space, top), top, "maximal", FamilyParams(grid_k=3)
        )
        calls = {"n": 0}

        def biased(region, exclude=(), prefer_successor=True):
            calls["n"] += 1
            if calls["n"] == 1 and region.contains_point(limit_pt):
                return limit_pt
            return real_next_point(region, exclude, prefer_successor)

        monkeypatch.setattr(selrel_mod, "next_point", biased)
        u = clopen_separation(
            f, top, omega2_space.whole(), TwoStepHint(lambda q: maximal_at(omega2_space, q))
        )
        assert u.is_clopen() and u.contains_point(top)
        assert calls["n"] >= 2  # the second pick actually ran

    def test_stuck_witness_reported(self, omega2_space, monkeypatch):
        import hypersel.selrel as selrel_mod
        from hypersel.space import next_point as real_next_point

        top = omega2_space.point(0, W2)
        limit_pt = omega2_space.point(0, W)
        f = decomp_to_extreme_selection(
            point_decomposition(omega2_space, top), top, "maximal", FamilyParams(grid_k=3)
        )
        calls = {"n": 0}

        def biased(region, exclude=(), prefer_successor=True):
            calls["n"] += 1
            if calls["n"] == 1 and region.contains_point(limit_pt):
                return limit_pt
            return real_next_point(region, exclude, prefer_successor)

        monkeypatch.setattr(selrel_mod, "next_point", biased)
        missing = Region.from_intervals(omega2_space, [(0, O(9), O(9))])
        with pytest.raises(SeparationStuckError):
            clopen_separation(f, top, omega2_space.whole(), WitnessHint(missing))
