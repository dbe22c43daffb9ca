"""Tests for the orchestration pipeline and its Report."""

import json

import jsonschema
import pytest

from chowcalc import so4pipeline
from chowcalc.so4pipeline import (
    DEFAULT_DEGREE_BOUND,
    Lemma4Data,
    PipelineError,
    REPORT_SCHEMA,
    So4Pipeline,
    lemma4_check,
    theorem1_structure_oracle,
)

# the two recorded reference values the computation does not reproduce
KNOWN_FAILING = {"pushforward-G2E", "pushforward-G2E.b1^2*b2-mod-J"}


@pytest.fixture(scope="module")
def report():
    return So4Pipeline(degree_bound=DEFAULT_DEGREE_BOUND, seed=0).run_all()


def by_name(report):
    return {c.name: c for c in report.checks}


def test_report_schema(report):
    jsonschema.validate(report.to_dict(), REPORT_SCHEMA)
    # json round trip preserves the verdicts
    data = json.loads(report.to_json())
    assert data["overall"] == report.overall
    assert [c["status"] for c in data["checks"]] == [
        c.status for c in report.checks
    ]


def test_exactly_the_known_checks_fail(report):
    failing = {c.name for c in report.checks if c.status == "fail"}
    assert failing == KNOWN_FAILING
    assert report.overall == "fail"


def test_class_displays_pass(report):
    checks = by_name(report)
    assert checks["class-Y"].status == "pass"
    assert checks["class-G2E-factor"].status == "pass"


def test_pushforward_values(report):
    checks = by_name(report)
    pf = checks["pushforward-G2E"]
    assert pf.expected == "13*c1 - 2*f1"
    assert pf.computed == "3*c1 - 2*f1"
    # the middle four reduce correctly mod (c1, f1)
    for name in (
        "pushforward-G2E.b1-mod-J",
        "pushforward-G2E.b1^2-mod-J",
        "pushforward-G2E.b2-mod-J",
        "pushforward-G2E.b1*b2-mod-J",
    ):
        assert checks[name].status == "pass"
    # the last recorded value differs from the computed one only by
    # members of the earlier entries' ideal
    assert checks["pushforward-G2E.b1^2*b2-ideal-consistency"].status == "pass"


def test_structural_checks_pass(report):
    checks = by_name(report)
    for name in (
        "tower-relation-t4-mod-J",
        "tower-relation-t5-mod-J",
        "tower-relation-t6-mod-J",
        "relation-t4-in-final-ideal",
        "relation-t5-in-final-ideal",
        "relation-t6-in-final-ideal",
        "ideal-identity",
        "lattice-generation-reference",
        "lattice-generation-computed",
        "presentation-relations",
        "quotient-structure",
        "ruling-symmetry",
        "gysin-oracle-agreement",
        "monomial-closure",
    ):
        assert checks[name].status == "pass", name


def test_degree_bound_skips():
    rep = So4Pipeline(degree_bound=5, seed=0).run_all()
    checks = by_name(rep)
    assert checks["tower-relation-t6-mod-J"].status == "skipped"
    assert checks["tower-relation-t5-mod-J"].status != "skipped"
    assert checks["pushforward-G2E"].status != "skipped"
    assert checks["pushforward-G2E.b1^2*b2-mod-J"].status == "skipped"
    assert checks["ideal-identity"].status == "skipped"
    assert "degree bound" in checks["tower-relation-t6-mod-J"].computed


def test_minimum_degree_bound_passes():
    rep = So4Pipeline(degree_bound=3, seed=0).run_all()
    assert rep.overall == "pass"
    statuses = {c.status for c in rep.checks}
    assert statuses == {"pass", "skipped"}
    with pytest.raises(PipelineError):
        So4Pipeline(degree_bound=2)


def test_seed_invariance(report):
    other = So4Pipeline(degree_bound=DEFAULT_DEGREE_BOUND, seed=99).run_all()

    def stripped(rep):
        out = rep.to_dict()
        for c in out["checks"]:
            c.pop("elapsed_ms")
        out["config"].pop("seed")
        return out

    assert stripped(other) == stripped(report)


def test_tampered_reference_flags_exactly_that_check(report):
    class Tampered(So4Pipeline):
        def _reference_polys(self):
            refs = super()._reference_polys()
            t = self.cf_table
            refs["t_modJ"] = list(refs["t_modJ"])
            refs["t_modJ"][0] = refs["t_modJ"][0] + 7 * t.var("c4")
            return refs

    rep = Tampered(degree_bound=DEFAULT_DEGREE_BOUND, seed=0).run_all()
    failing = {c.name for c in rep.checks if c.status == "fail"}
    assert failing == KNOWN_FAILING | {"tower-relation-t4-mod-J"}


def test_lemma4_check_values():
    res = lemma4_check(Lemma4Data((13, -2)))
    assert res["f1_image"] == 26
    assert res["image_generator"] == 2
    assert res["normal_generates"]
    res = lemma4_check(Lemma4Data((3, -2)))
    assert res["f1_image"] == 6
    assert res["image_generator"] == 2
    assert res["normal_generates"]


def test_lemma4_check_rejects_bad_data():
    with pytest.raises(PipelineError):
        lemma4_check(Lemma4Data((4, -2)))  # not primitive
    with pytest.raises(PipelineError):
        lemma4_check(Lemma4Data((1, 3)))  # no integral solution
    res = lemma4_check(Lemma4Data((13, -2), pullback_N=3))
    assert not res["normal_generates"]


def test_structure_oracle_values():
    want = [(1, 0), (0, 0), (2, 0), (0, 1), (3, 0), (0, 1), (4, 1)]
    got = [theorem1_structure_oracle(d) for d in range(7)]
    assert got == want


def test_text_and_json_agree(report):
    text = report.to_text()
    for c in report.checks:
        tag = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP"}[c.status]
        assert ("%s  " % tag) in text
        assert c.name in text
    assert "overall: %s" % report.overall in text


def test_run_wrapper():
    rep = so4pipeline.run(degree_bound=4, seed=1)
    assert {c.status for c in rep.checks} <= {"pass", "fail", "skipped"}
    checks = by_name(rep)
    assert checks["class-Y"].status == "pass"
    assert checks["pushforward-G2E"].status == "skipped"
