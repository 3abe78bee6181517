"""Acceptance criteria, one test each; a pass/fail line per criterion is printed in the summary."""

import functools
import json
import re
import time

from good.checker import Rule, check, document_obligations
from good.cli import main
from good.model import SignalClause, ViewDocument, ViewKind
from good.parser import parse_master
from good.projector import diff_views, project

import test_checker
import test_properties
from conftest import ACCEPTANCE, CORPUS, corpus_text, parse_corpus


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                ACCEPTANCE[number] = (title, False)
                print(f"criterion {number}: FAIL  {title}")
                raise
            ACCEPTANCE[number] = (title, True)
            print(f"criterion {number}: PASS  {title}")

        return run

    return wrap


def as_view(name, kind):
    doc, _ = parse_corpus(name)
    return ViewDocument(kind, doc.classes, name)


@criterion(1, "golden External/Internal projection of the Bag master, under 1 s")
def test_golden_projection():
    started = time.perf_counter()
    doc, diags = parse_corpus("Bag.java")
    external = project(doc, ViewKind.EXTERNAL)
    internal = project(doc, ViewKind.INTERNAL)
    ext_delta = diff_views(as_view("listing_external_spec.java", ViewKind.EXTERNAL), external)
    int_delta = diff_views(as_view("listing_internal_spec_reconciled.java", ViewKind.INTERNAL), internal)
    elapsed = time.perf_counter() - started
    assert not [d for d in diags if d.severity == "error"]
    assert ext_delta == []
    assert int_delta == []
    # the verbatim internal listing words four comments differently from the external one
    verbatim = diff_views(as_view("listing_internal_spec.java", ViewKind.INTERNAL), internal)
    assert {(d.member, d.field) for d in verbatim} == {(None, "desc"), ("Bag", "desc"), ("Bag", "ensures"), ("size", "desc")}
    assert len(verbatim) == 4
    assert elapsed < 1.0


@criterion(2, "robustness listing: two subspecs per level with the ArgumentNotFoundException signal")
def test_robustness_parsing():
    source = "public class Bag<T> {\n" + corpus_text("listing_robustness_remove.txt") + "\n}\n"
    doc, diags = parse_master(source, "robust")
    assert not [d for d in diags if d.severity == "error"]
    (remove,) = doc.classes[0].find("remove")
    for block in (remove.external_spec, remove.internal_spec):
        assert len(block.subspecs) == 2
        assert [s.label for s in block.subspecs] == ["elem is present", "elem is not present"]
        assert block.subspec("elem is not present").signals == (
            SignalClause("ArgumentNotFoundException", "Elem is not present"),
        )


@criterion(3, "gen-tests on b1 = {2,2,6,4} emits the three expected cases")
def test_derivation(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GOOD_NO_COLOR", "1")
    code = main(["gen-tests", str(CORPUS / "BagRobust.java"), "--model", str(CORPUS / "bag_remove.model"), "--out", str(tmp_path)])
    assert code == 0
    manifest = json.loads((tmp_path / "BagRemoveTest.manifest.json").read_text())
    cases = {c["name"]: c for c in manifest["cases"]}
    assert list(cases) == ["testRemoveLastOccurrence", "testRemoveDuplicated", "testRemoveElemIsNotPresent"]

    def observed(name):
        return {o["call"]: o["expected"] for o in cases[name]["expectation"]["observations"]}

    assert cases["testRemoveLastOccurrence"]["inputs"] == ["6"]
    assert observed("testRemoveLastOccurrence") == {"mult(6)": "0", "mult(2)": "2", "mult(4)": "1"}
    assert cases["testRemoveDuplicated"]["inputs"] == ["2"]
    assert observed("testRemoveDuplicated") == {"mult(2)": "1", "mult(4)": "1", "mult(6)": "1"}
    absent = cases["testRemoveElemIsNotPresent"]
    assert absent["inputs"] == ["10"]
    assert absent["expectation"] == {"kind": "exception", "type": "ArgumentNotFoundException", "message": "Elem is not present"}
    suite = (tmp_path / "BagRemoveTest.java").read_text()
    assert suite.count("@Test") == 3


@criterion(4, "one R1 plus one R2 and one R3 per public method with both spec levels")
def test_obligations(bag):
    obligations = document_obligations(bag)
    # independent count straight from the source text
    public_methods = re.findall(r"^\s+public [^;=]*\(", corpus_text("Bag.java"), re.M)
    assert len(public_methods) == 6
    assert sum(o.rule is Rule.R1_INVARIANT for o in obligations) == 1
    both = [
        m.name
        for m in bag.classes[0].members
        if m.visibility.value == "public" and m.external_spec and m.internal_spec and m.kind.value != "attribute"
    ]
    assert len(both) == len(public_methods)
    for name in both:
        rules = [o.rule for o in obligations if o.subject == ("Bag", name)]
        assert rules.count(Rule.R2_PRECONDITION) == 1 and rules.count(Rule.R3_POSTCONDITION) == 1, name
    (add_r3,) = [o for o in obligations if o.subject == ("Bag", "add") and o.rule is Rule.R3_POSTCONDITION]
    assert r"B(elem) = \old(B(elem)) + 1" in [c.raw for c in add_r3.consequent]


@criterion(5, "each of E001-E006 triggered by one mutation; clean corpus has no errors")
def test_mutation_suite(bag, bag_robust):
    assert [d for d in check(bag) + check(bag_robust) if d.is_error] == []
    seen = set()
    for code, name, old, new in test_checker.MUTATIONS:
        assert test_checker.errors(test_checker.mutate(name, old, new)) == [code]
        seen.add(code)
    assert seen == {f"E00{i}" for i in range(1, 7)}


@criterion(6, "properties: monotonicity, round-trip, case-count law, normalize idempotence")
def test_property_suite():
    test_properties.test_view_membership_monotone()
    test_properties.test_render_parse_fixpoint()
    test_properties.test_case_count_is_partition_product()
    test_properties.test_normalize_idempotent()
    for name in ("Bag.java", "BagRobust.java"):
        doc, _ = parse_corpus(name)
        for kind in ViewKind:
            test_properties.test_render_parse_fixpoint.hypothesis.inner_test(doc, kind)


@criterion(7, "needs rule: tests complete over a draft view exits 1, consistent state exits 0")
def test_workflow_rule(monkeypatch, capsys):
    monkeypatch.setenv("GOOD_NO_COLOR", "1")
    assert main(["workflow", "status", str(CORPUS / "workflow" / "violation.json")]) == 1
    out = capsys.readouterr().out
    assert "'Writing External Tests' is complete but needs 'External View', which is draft" in out
    assert main(["workflow", "status", str(CORPUS / "workflow" / "consistent.json")]) == 0
