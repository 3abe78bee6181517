from good.model import (
    Clause,
    Formality,
    MasterDocument,
    Member,
    MemberKind,
    Signature,
    SpecBlock,
    ViewKind,
    Visibility,
    member_view_membership,
    normalize,
    normalize_body,
    normalize_spec,
    normalize_text,
    structurally_equal,
)
import pytest


def test_clause_equality_ignores_tree():
    assert Clause.of("a = 1") == Clause("a = 1", Formality.FORMAL)


def test_normalize_text():
    assert normalize_text("a \r\n  b\t c ") == "a b c"


def test_normalize_body_dedents():
    assert normalize_body("\n\n    x = 1;\n      y;\n\n") == "x = 1;\n  y;"


def test_empty_block_is_no_block():
    assert normalize_spec(SpecBlock()) is None
    assert normalize_spec(SpecBlock(desc=Clause.of("   "))) is None


def test_view_kind_parse():
    assert ViewKind.parse(" Internal ") is ViewKind.INTERNAL
    with pytest.raises(ValueError):
        ViewKind.parse("sideways")


def test_membership():
    def m(vis):
        return Member(MemberKind.METHOD, vis, Signature("f"))

    assert member_view_membership(m(Visibility.PUBLIC), ViewKind.EXTERNAL)
    assert not member_view_membership(m(Visibility.PRIVATE), ViewKind.EXTERNAL)
    assert not member_view_membership(m(Visibility.PACKAGE), ViewKind.EXTERNAL)
    assert member_view_membership(m(Visibility.PRIVATE), ViewKind.INTERNAL)


def test_node_ids():
    f = Member(MemberKind.METHOD, Visibility.PUBLIC, Signature("f", (("a", "T"), ("b", "int"))))
    assert f.node_id("C") == "C#f(T,int)"
    x = Member(MemberKind.ATTRIBUTE, Visibility.PRIVATE, Signature("x", declared_type="int"))
    assert x.node_id("C") == "C#x"


def test_structural_equality_modulo_whitespace(bag):
    from good.parser import parse_master
    from conftest import corpus_text

    respaced = corpus_text("Bag.java").replace("@ensures B(elem) = 0", "@ensures   B(elem)   =  0")
    other, _ = parse_master(respaced, "x")
    assert structurally_equal(bag, other)
    assert normalize(normalize(bag)) == normalize(bag)
    assert not structurally_equal(bag, MasterDocument())
