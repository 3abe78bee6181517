from pathlib import Path

import pytest

from good.parser import parse_master

CORPUS = Path(__file__).parent / "corpus"


def corpus_text(name: str) -> str:
    return (CORPUS / name).read_text(encoding="utf-8")


def parse_corpus(name: str):
    return parse_master(corpus_text(name), name)


@pytest.fixture(scope="session")
def bag():
    doc, diags = parse_corpus("Bag.java")
    assert not [d for d in diags if d.severity == "error"]
    return doc


@pytest.fixture(scope="session")
def bag_robust():
    doc, diags = parse_corpus("BagRobust.java")
    assert not [d for d in diags if d.severity == "error"]
    return doc


# criterion number -> (title, passed); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
