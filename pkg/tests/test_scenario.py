import json

import pytest

from hypersel.ordinal import OMEGA, ZERO, Ordinal, parse_ordinal
from hypersel.space import Region, Space
from hypersel.scenario import (
    Scenario,
    ScenarioError,
    canonical_net_corpus,
    make_fan_scenario,
    make_ordinal_scenario,
    make_wedge_scenario,
    point_from_json,
    point_to_json,
    region_from_json,
    region_to_json,
    run_scenario,
)

O = Ordinal.from_int
W = OMEGA


def minimal_doc(**kw):
    doc = {
        "schema": "hypersel-scenario/1",
        "name": "t",
        "space": {"branches": ["w"], "gluings": []},
        "objects": {},
        "suites": [],
    }
    doc.update(kw)
    return doc


class TestNotation:
    def test_region_roundtrip(self):
        sp = Space([parse_ordinal("w*2")])
        reg = Region.make(
            sp, [(0, ZERO, O(3), True), (0, W, parse_ordinal("w*2"), False)]
        )
        lit = region_to_json(reg)
        assert region_from_json(sp, lit) == reg

    def test_point_roundtrip(self):
        sp = Space([W, W], [[(0, W), (1, W)]])
        p = sp.point(1, W)
        assert point_from_json(sp, point_to_json(p)) == p

    def test_witness_reingestable(self):
        # a report witness in scenario notation parses back to the same set
        sp = Space([W])
        reg = Region.from_intervals(sp, [(0, O(2), O(5))])
        assert region_from_json(sp, region_to_json(reg)) == reg


class TestLoading:
    def test_minimal_document(self):
        sc = Scenario.load(minimal_doc())
        assert sc.name == "t"

    def test_bad_schema(self):
        with pytest.raises(ScenarioError):
            Scenario.load(minimal_doc(schema="nope/9"))

    def test_bad_ordinal_literal(self):
        doc = minimal_doc()
        doc["space"]["branches"] = ["w*oops"]
        with pytest.raises(ScenarioError):
            Scenario.load(doc)

    def test_unknown_check(self):
        doc = minimal_doc(suites=[{"check": "nonexistent"}])
        with pytest.raises(ScenarioError):
            Scenario.load(doc)

    def test_unresolved_reference(self):
        doc = minimal_doc()
        doc["objects"] = {
            "selections": {"f": {"kind": "patched", "parent": "ghost",
                                  "at": [[0, "0", "3"]], "value": [0, "0"]}}
        }
        with pytest.raises(ScenarioError):
            Scenario.load(doc)

    def test_open_set_validation(self):
        doc = minimal_doc()
        doc["objects"] = {"open_sets": {"v": [[0, "w", "w"]]}}
        with pytest.raises(ScenarioError):
            Scenario.load(doc)

    def test_overrides_apply(self):
        sc = Scenario.load(minimal_doc(), overrides={"window": 32})
        assert sc.params["window"] == 32

    def test_file_loading(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps(minimal_doc()))
        assert Scenario.load(str(path)).name == "t"

    def test_unreadable_file(self):
        with pytest.raises(ScenarioError):
            Scenario.load("/nonexistent/path.json")


class TestCorpus:
    def test_at_least_fifty_across_canonical_spaces(self):
        total = 0
        for sp in [
            Space([parse_ordinal("w*2")]),
            Space([W, W], [[(0, W), (1, W)]]),
            Space([W, W, W], [[(0, W), (1, W), (2, W)]]),
        ]:
            total += len(canonical_net_corpus(sp))
        assert total >= 50

    def test_all_nets_converge(self):
        from hypersel.hyperspace import net_convergence_check

        sp = Space([parse_ordinal("w*2")])
        for net in canonical_net_corpus(sp, window=64):
            assert net_convergence_check(net).passed, net.name


class TestReports:
    def test_deterministic_modulo_timing(self):
        doc = make_wedge_scenario(2)
        doc["suites"] = doc["suites"][:3]
        r1 = run_scenario(Scenario.load(doc)).to_json()
        r2 = run_scenario(Scenario.load(doc)).to_json()

        def strip(rep):
            for rec in rep["results"]:
                rec.pop("elapsed_ms")
            return rep

        assert json.dumps(strip(r1), sort_keys=True) == json.dumps(
            strip(r2), sort_keys=True
        )

    def test_failing_check_yields_exit_one(self):
        doc = minimal_doc(
            objects={
                "points": {"top": [0, "w"], "zero": [0, "0"]},
                "selections": {"f": {"kind": "order_max"}},
            },
            suites=[
                {"check": "extremality", "selection": "f", "point": "zero",
                 "mode": "maximal", "family": {"grid_k": 3}}
            ],
        )
        report = run_scenario(Scenario.load(doc))
        assert report.exit_code() == 1
        assert report.records[0].status == "fail"
        assert report.records[0].witness is not None

    def test_generator_documents_validate(self):
        for doc in [make_ordinal_scenario("w*2"), make_wedge_scenario(2),
                    make_fan_scenario(3)]:
            sc = Scenario.load(doc)
            assert sc.suites
