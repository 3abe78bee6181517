"""Hypothesis strategies for well-formed annotated documents."""

from hypothesis import strategies as st

from good.model import (
    Clause,
    ClassUnit,
    MasterDocument,
    Member,
    MemberKind,
    SignalClause,
    Signature,
    SpecBlock,
    SubSpec,
    Visibility,
)

NAMES = ["alpha", "beta", "count", "items", "total", "head", "tail", "value", "depth", "store", "cache", "limit"]
TYPES = ["int", "T", "boolean", "String", "List<T>", "Map<K, V>", "int[]"]
TOKENS = ["x", "y", ">", ">=", "0", "=", "+", "1", "size()", r"\old(x)", "B(e)", "&&", "elements", "the", "bag", "is"]
WORDS = ["first", "second", "empty", "full", "case", "small", "large", "present", "absent"]
STATEMENTS = ["count++;", "return count;", "lst.add(elem);", "x = x + 1;", "if (x > 0) {\n  x--;\n}", "// keep order"]

ident = st.sampled_from(NAMES)
clause = st.lists(st.sampled_from(TOKENS), min_size=1, max_size=6).map(lambda ts: Clause.of(" ".join(ts)))
clauses = st.lists(clause, max_size=2).map(tuple)
label = st.lists(st.sampled_from(WORDS), min_size=1, max_size=3, unique=True).map(" ".join)
signal = st.builds(
    SignalClause,
    st.sampled_from(["IllegalStateException", "ArgumentNotFoundException"]),
    st.one_of(st.none(), st.lists(st.sampled_from(WORDS), min_size=1, max_size=3).map(" ".join)),
)
assignable = st.lists(ident, max_size=2, unique=True).map(tuple)

subspec = st.builds(
    SubSpec,
    label,
    st.lists(clause, min_size=1, max_size=2).map(tuple),
    clauses,
    st.lists(signal, max_size=1).map(tuple),
    assignable,
)


@st.composite
def method_spec(draw, internal=False):
    desc = draw(st.one_of(st.none(), clause))
    pure = draw(st.booleans())
    subs = draw(st.lists(subspec, max_size=2, unique_by=lambda s: s.label).map(tuple))
    flat = not subs
    block = SpecBlock(
        desc=desc,
        requires=draw(clauses) if flat else (),
        ensures=draw(clauses) if flat else (),
        signals=draw(st.lists(signal, max_size=1).map(tuple)) if flat else (),
        assignable=() if pure else draw(assignable),
        pure=pure,
        represents=draw(clauses) if internal else (),
        subspecs=subs,
    )
    return None if block.is_empty() else block


@st.composite
def class_spec(draw, internal=False):
    block = SpecBlock(
        desc=draw(st.one_of(st.none(), clause)),
        invariants=draw(clauses),
        represents=draw(clauses) if internal else (),
    )
    return None if block.is_empty() else block


body = st.lists(st.sampled_from(STATEMENTS), min_size=1, max_size=3).map("\n".join)
visibility = st.sampled_from([Visibility.PUBLIC, Visibility.PRIVATE, Visibility.PACKAGE])


@st.composite
def member(draw, class_name, generic):
    kind = draw(st.sampled_from([MemberKind.ATTRIBUTE, MemberKind.METHOD, MemberKind.CONSTRUCTOR]))
    if kind is MemberKind.ATTRIBUTE:
        vis = draw(visibility)
        sig = Signature(draw(ident), declared_type=draw(st.sampled_from(TYPES)))
        init = draw(st.one_of(st.none(), st.sampled_from(["0", "new ArrayList<T>()", "null"])))
        spec = draw(st.one_of(st.none(), class_spec(internal=vis is not Visibility.PUBLIC)))
        if vis is Visibility.PUBLIC:
            return Member(kind, vis, sig, spec, None, init)
        return Member(kind, vis, sig, None, spec, init)
    names = draw(st.lists(ident, max_size=3, unique=True))
    params = tuple((n, draw(st.sampled_from(TYPES))) for n in names)
    if kind is MemberKind.CONSTRUCTOR:
        vis = Visibility.PUBLIC
        sig = Signature(class_name, params, name_type_args=draw(st.sampled_from(["", "<T>"])) if generic else "")
    else:
        vis = draw(visibility)
        sig = Signature(draw(ident), params, return_type=draw(st.sampled_from(["void"] + TYPES)))
    code = draw(st.one_of(st.none(), body))
    internal = draw(st.one_of(st.none(), method_spec(internal=True)))
    if vis is Visibility.PUBLIC:
        return Member(kind, vis, sig, draw(st.one_of(st.none(), method_spec())), internal, code)
    return Member(kind, vis, sig, None, internal, code)


@st.composite
def class_unit(draw, name):
    generic = draw(st.booleans())
    raw = draw(st.lists(member(name, generic), max_size=6))
    members, seen = [], set()
    for m in raw:
        if m.name in seen:
            continue
        seen.add(m.name)
        members.append(m)
    return ClassUnit(
        name,
        ("T",) if generic else (),
        draw(st.one_of(st.none(), class_spec())),
        draw(st.one_of(st.none(), class_spec(internal=True))),
        tuple(members),
    )


@st.composite
def documents(draw):
    names = draw(st.lists(st.sampled_from(["Bag", "Stack", "Queue", "Counter", "Ledger"]), min_size=1, max_size=3, unique=True))
    return MasterDocument(tuple(draw(class_unit(n)) for n in names), "generated")
