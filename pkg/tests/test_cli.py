import json

import pytest

from good.cli import main
from good.projector import render, project
from good.model import ViewKind

from conftest import CORPUS, corpus_text, parse_corpus

BAG = str(CORPUS / "Bag.java")
ROBUST = str(CORPUS / "BagRobust.java")
MODEL = str(CORPUS / "bag_remove.model")


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("GOOD_NO_COLOR", "1")


def test_project_external(tmp_path, capsys):
    assert main(["project", BAG, "--view", "external", "--out", str(tmp_path / "build")]) == 0
    written = (tmp_path / "build" / "Bag.external.java").read_text()
    doc, _ = parse_corpus("Bag.java")
    assert written == render(project(doc, ViewKind.EXTERNAL))


def test_project_missing_file(capsys):
    assert main(["project", "nope.java"]) == 3
    assert "nope.java" in capsys.readouterr().err


def test_project_parse_error_still_writes(tmp_path, capsys):
    src = tmp_path / "Broken.java"
    src.write_text("public class Broken {\n  public ??? x( {}\n  /** @desc ok */\n  public void ok() {}\n}\n")
    assert main(["project", str(src), "--out", str(tmp_path / "o")]) == 2
    assert "P002" in capsys.readouterr().out
    assert "ok()" in (tmp_path / "o" / "Broken.external.java").read_text()


def test_config_defaults(tmp_path):
    (tmp_path / "good.toml").write_text('[good]\nview = "internal"\nout = "views"\n')
    assert main(["project", BAG]) == 0
    assert (tmp_path / "views" / "Bag.internal.java").exists()


def test_flags_override_config(tmp_path):
    (tmp_path / "good.toml").write_text('view = "internal"\n')
    assert main(["project", BAG, "--view", "code", "--out", "x"]) == 0
    assert (tmp_path / "x" / "Bag.code.java").exists()


def test_check_human(capsys):
    assert main(["check", BAG]) == 0
    out = capsys.readouterr().out
    assert "Bag.java:55:4 W005 " in out
    assert "R1_invariant Bag" in out and "R3_postcondition Bag#add" in out


def test_check_finding_exits_1(tmp_path, capsys):
    bad = tmp_path / "Bag.java"
    bad.write_text(corpus_text("Bag.java").replace("   * @pure\n   * @ensures mult", "   * @pure\n   * @assignable lst\n   * @ensures mult"))
    assert main(["check", str(bad)]) == 1
    assert " E002 " in capsys.readouterr().out


def test_check_machine_schema(capsys):
    assert main(["check", BAG, ROBUST, "--format", "machine"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["schema_version"] == 1
    assert [f["path"] for f in report["files"]] == [BAG, ROBUST]
    ob = report["files"][0]["obligations"][0]
    assert set(ob) == {"rule", "class", "member", "subspec", "antecedents", "consequent", "status"}


def test_check_is_byte_stable(capsys):
    main(["check", BAG, "--format", "machine"])
    first = capsys.readouterr().out
    main(["check", BAG, "--format", "machine"])
    assert capsys.readouterr().out == first


def test_gen_tests(tmp_path, capsys):
    assert main(["gen-tests", ROBUST, "--model", MODEL, "--out", "t"]) == 0
    assert capsys.readouterr().out.split() == ["testRemoveLastOccurrence", "testRemoveDuplicated", "testRemoveElemIsNotPresent"]
    manifest = json.loads((tmp_path / "t" / "BagRemoveTest.manifest.json").read_text())
    assert len(manifest["cases"]) == 3
    assert (tmp_path / "t" / "BagRemoveTest.java").read_text().count("@Test") == 3


def test_gen_tests_internal_superset(tmp_path, capsys):
    main(["gen-tests", ROBUST, "--model", MODEL, "--out", "e"])
    main(["gen-tests", ROBUST, "--model", MODEL, "--view", "internal", "--out", "i"])
    names = lambda d: {c["name"] for c in json.loads((tmp_path / d / "BagRemoveTest.manifest.json").read_text())["cases"]}
    assert names("i") >= names("e")


def test_gen_tests_missing_model():
    assert main(["gen-tests", ROBUST, "--model", "missing.model"]) == 3


def test_gen_tests_model_error(tmp_path, capsys):
    (tmp_path / "m").write_text("subject Bag#pop\n")
    assert main(["gen-tests", BAG, "--model", "m"]) == 1
    assert "T001" in capsys.readouterr().out


def test_workflow_fixtures(capsys):
    assert main(["workflow", "status", str(CORPUS / "workflow" / "violation.json")]) == 1
    assert "violation" in capsys.readouterr().out
    assert main(["workflow", "status", str(CORPUS / "workflow" / "consistent.json")]) == 0


def test_workflow_empty_state(tmp_path, capsys):
    (tmp_path / "s.json").write_text("{}")
    assert main(["workflow", "status", "s.json", "--format", "machine"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert sorted(report["startable"]) == ["Code Analysis", "External Analysis", "Internal Analysis"]


def test_workflow_custom_graph(tmp_path, capsys):
    main(["workflow", "graph"])
    (tmp_path / "g.json").write_text(capsys.readouterr().out)
    (tmp_path / "s.json").write_text("{}")
    assert main(["workflow", "status", "s.json", "--graph", "g.json"]) == 0


def test_usage_error_is_not_parse_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["project"])
    assert info.value.code == 3


def test_no_color_when_disabled(capsys):
    main(["check", BAG])
    assert "\x1b[" not in capsys.readouterr().out
