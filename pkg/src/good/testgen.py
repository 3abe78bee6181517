"""Specification-based test derivation.

The pipeline is: a hand-written test model (partitions per input, optional
expected observations) -> all-combinations enumeration bound to the member's
(sub)specifications -> named cases -> manifest and JUnit-style skeletons.

Model file format, one statement per line::

    subject Bag#remove
    fixture b1: add(2); add(2); add(6); add(4)
    domain elem: boundary "last occurrence" = 6 expect mult(6)=0, mult(2)=2
    domain elem: equivalence "absent" = 10 -> subspec "elem is not present"
    state bag: equivalence "four elements" = b1

``domain`` partitions a parameter of the subject.  ``state`` partitions the
object state; its representatives name fixtures.  Comments take whole lines.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from good.model import ClassUnit, MasterDocument, Member, MemberKind, SpecBlock, SubSpec, ViewDocument, ViewKind

SCHEMA_VERSION = 1

CATALOG = {
    "T001": ("error", "unknown subject, parameter or fixture"),
    "T002": ("error", "parameter with no partitions"),
    "T003": ("error", "partition maps to an unknown @sub label"),
    "T004": ("error", "malformed model line"),
    "T005": ("error", "one combination maps to several @sub labels"),
}


@dataclass(frozen=True)
class ModelDiagnostic:
    code: str
    message: str
    line: int = 0

    @property
    def severity(self) -> str:
        return CATALOG[self.code][0]


class TestModelError(Exception):
    __test__ = False

    def __init__(self, code: str, message: str):
        super().__init__(f"{code} {message}")
        self.code = code
        self.message = message


@dataclass(frozen=True)
class Partition:
    label: str
    kind: str  # equivalence | boundary
    representative: str
    maps_to_subspec: Optional[str] = None
    observations: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class TestModel:
    __test__ = False

    subject: tuple[str, str]
    fixtures: tuple[tuple[str, tuple[tuple[str, tuple[str, ...]], ...]], ...] = ()
    param_domains: tuple[tuple[str, tuple[Partition, ...]], ...] = ()
    state_terms: frozenset[str] = frozenset()
    subject_params: Optional[tuple[str, ...]] = None

    def domain(self, name: str) -> tuple[Partition, ...]:
        for n, parts in self.param_domains:
            if n == name:
                return parts
        return ()


@dataclass(frozen=True)
class Expectation:
    kind: str  # observations | exception
    observations: tuple[tuple[str, str], ...] = ()
    todo: tuple[str, ...] = ()
    exception_type: Optional[str] = None
    message: Optional[str] = None


@dataclass(frozen=True)
class TestCase:
    __test__ = False

    name: str
    subject: tuple[str, str]
    fixture: Optional[str]
    inputs: tuple[str, ...]
    expectation: Expectation
    bound_subspec: Optional[str] = None
    partitions: tuple[str, ...] = ()
    fixture_ops: tuple[tuple[str, tuple[str, ...]], ...] = field(default=(), compare=False)


# --- names ---------------------------------------------------------------


def _upper_first(word: str) -> str:
    return word[:1].upper() + word[1:]


def test_name(member: str, case_label: str) -> str:
    """``test`` + member + case label, camel-cased with non-alphanumerics dropped."""
    words = [w for w in re.split(r"[^A-Za-z0-9]+", case_label) if w]
    member_part = "".join(_upper_first(w) for w in re.split(r"[^A-Za-z0-9]+", member) if w)
    return "test" + member_part + "".join(_upper_first(w) for w in words)


test_name.__test__ = False  # type: ignore[attr-defined]


def unique_names(names: Sequence[str]) -> list[str]:
    """Suffix repeated names with an ordinal: ``x``, ``x2``, ``x3``..."""
    seen: dict[str, int] = {}
    taken = set(names)
    out = []
    for n in names:
        count = seen.get(n, 0) + 1
        seen[n] = count
        if count == 1:
            out.append(n)
            continue
        candidate = f"{n}{count}"
        while candidate in taken:
            count += 1
            candidate = f"{n}{count}"
        seen[n] = count
        taken.add(candidate)
        out.append(candidate)
    return out


# --- model loading -------------------------------------------------------

_LITERAL = r'-?\d+(?:\.\d+)?[lLfFdD]?|"(?:[^"\\]|\\.)*"|\'(?:[^\'\\]|\\.)\'|[A-Za-z_$][\w$.]*'
_DOMAIN = re.compile(
    rf"""(?P<which>domain|state)\s+(?P<name>[A-Za-z_$][\w$]*)\s*:\s*
        (?P<kind>equivalence|boundary)\s+"(?P<label>(?:[^"\\]|\\.)*)"\s*=\s*(?P<rep>{_LITERAL})\s*
        (?:->\s*subspec\s+"(?P<sub>(?:[^"\\]|\\.)*)"\s*)?
        (?:expect\s+(?P<expect>.+))?\Z""",
    re.X,
)
_CALL = re.compile(r"\s*([A-Za-z_$][\w$]*)\s*\((.*)\)\s*\Z", re.S)


def split_args(text: str, sep: str = ",") -> list[str]:
    """Split at ``sep`` outside parentheses, brackets and string literals."""
    out, cur, depth, quote = [], [], 0, None
    i = 0
    while i < len(text):
        ch = text[i]
        if quote:
            cur.append(ch)
            if ch == "\\" and i + 1 < len(text):
                cur.append(text[i + 1])
                i += 1
            elif ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
            cur.append(ch)
        elif ch in "([{":
            depth += 1
            cur.append(ch)
        elif ch in ")]}":
            depth -= 1
            cur.append(ch)
        elif ch == sep and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
        i += 1
    tail = "".join(cur).strip()
    if tail or out:
        out.append(tail)
    return out


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s)


def _parse_observations(text: str) -> tuple[tuple[str, str], ...]:
    out = []
    for item in split_args(text):
        m = re.match(rf"(.+?)\s*==?\s*({_LITERAL})\s*\Z", item, re.S)
        if m is None:
            raise ValueError(f"cannot read expectation {item!r}")
        out.append((re.sub(r"\s+", "", m.group(1)), m.group(2)))
    return tuple(out)


def _find_member(cls: ClassUnit, spec: str) -> Optional[Member]:
    m = re.match(r"([A-Za-z_$][\w$]*)\s*(?:\((.*)\))?\Z", spec.strip())
    if m is None:
        return None
    name, types = m.group(1), m.group(2)
    for member in cls.members:
        if member.name != name or member.kind is MemberKind.ATTRIBUTE:
            continue
        if types is None or tuple(t.strip() for t in split_args(types)) == member.signature.param_types():
            return member
    return None


def resolve_subject(doc: Union[MasterDocument, ViewDocument], subject: tuple[str, str]) -> Optional[Member]:
    cls = doc.find_class(subject[0])
    return None if cls is None else _find_member(cls, subject[1])


def load_test_model(
    text: str, doc: Union[MasterDocument, ViewDocument, None] = None
) -> tuple[Optional[TestModel], list[ModelDiagnostic]]:
    """Parse a model file.  With ``doc`` given, names are checked against it."""
    diags: list[ModelDiagnostic] = []
    subject: Optional[tuple[str, str]] = None
    fixtures: list = []
    domains: dict[str, list[Partition]] = {}
    state_terms: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word = line.split(None, 1)[0]
        try:
            if word == "subject":
                m = re.match(r"subject\s+([A-Za-z_$][\w$]*)#(.+)\Z", line)
                if m is None:
                    raise ValueError("expected 'subject Class#member'")
                subject = (m.group(1), m.group(2).strip())
            elif word == "fixture":
                m = re.match(r"fixture\s+([A-Za-z_$][\w$]*)\s*:\s*(.*)\Z", line)
                if m is None:
                    raise ValueError("expected 'fixture name: op(args); ...'")
                ops = []
                for call in split_args(m.group(2), ";"):
                    if not call:
                        continue
                    cm = _CALL.match(call)
                    if cm is None:
                        raise ValueError(f"cannot read fixture call {call!r}")
                    ops.append((cm.group(1), tuple(split_args(cm.group(2)))))
                fixtures.append((m.group(1), tuple(ops)))
            elif word in ("domain", "state"):
                m = _DOMAIN.match(line)
                if m is None:
                    raise ValueError("expected 'domain param: kind \"label\" = literal [-> subspec \"label\"] [expect ...]'")
                name = m.group("name")
                if m.group("which") == "state":
                    state_terms.add(name)
                part = Partition(
                    label=_unquote(m.group("label")),
                    kind=m.group("kind"),
                    representative=m.group("rep"),
                    maps_to_subspec=_unquote(m.group("sub")) if m.group("sub") is not None else None,
                    observations=_parse_observations(m.group("expect")) if m.group("expect") else (),
                )
                existing = domains.setdefault(name, [])
                if any(p.label == part.label for p in existing):
                    raise ValueError(f"duplicate partition label {part.label!r} for {name}")
                existing.append(part)
            else:
                raise ValueError(f"unknown statement {word!r}")
        except ValueError as exc:
            diags.append(ModelDiagnostic("T004", str(exc), lineno))
    if subject is None:
        diags.append(ModelDiagnostic("T001", "model has no subject line"))
        return None, diags

    fixture_names = {name for name, _ in fixtures}
    for term in sorted(state_terms):
        for p in domains[term]:
            if p.representative not in fixture_names:
                diags.append(ModelDiagnostic("T001", f"state partition {p.label!r} names unknown fixture {p.representative!r}"))

    params: Optional[tuple[str, ...]] = None
    if doc is not None:
        member = resolve_subject(doc, subject)
        if member is None:
            diags.append(ModelDiagnostic("T001", f"unknown subject {subject[0]}#{subject[1]}"))
        else:
            params = tuple(n for n, _ in member.signature.params)
            for name in domains:
                if name not in params and name not in state_terms:
                    diags.append(ModelDiagnostic("T001", f"{subject[0]}#{subject[1]} has no parameter {name!r}"))
            for p in params:
                if not domains.get(p):
                    diags.append(ModelDiagnostic("T002", f"parameter {p!r} has no partitions"))
    for name, parts in domains.items():
        if not parts:
            diags.append(ModelDiagnostic("T002", f"{name!r} has no partitions"))

    order = list(params or ()) + [n for n in domains if n not in (params or ())]
    model = TestModel(
        subject=subject,
        fixtures=tuple(fixtures),
        param_domains=tuple((n, tuple(domains.get(n, ()))) for n in order),
        state_terms=frozenset(state_terms),
        subject_params=params,
    )
    return model, diags


# --- enumeration ---------------------------------------------------------


def all_combinations(domains: Sequence[tuple[str, tuple[Partition, ...]]]) -> list[tuple[Partition, ...]]:
    return list(itertools.product(*(parts for _, parts in domains)))


COVERAGE: dict[str, Callable] = {"all-combinations": all_combinations}


def _governing(member: Member, kind: ViewKind) -> list[SpecBlock]:
    """Spec blocks consulted for a view, most specific first."""
    if kind is ViewKind.EXTERNAL:
        return [b for b in (member.external_spec,) if b is not None]
    return [b for b in (member.internal_spec, member.external_spec) if b is not None]


def _find_sub(blocks: list[SpecBlock], label: str) -> Optional[SubSpec]:
    for b in blocks:
        sub = b.subspec(label)
        if sub is not None:
            return sub
    return None


def enumerate_cases(model: TestModel, view: ViewDocument, coverage: str = "all-combinations") -> list[TestCase]:
    """Expand a model into named cases against one view of the subject."""
    member = resolve_subject(view, model.subject)
    if member is None:
        raise TestModelError("T001", f"{model.subject[0]}#{model.subject[1]} is not in the {view.kind.value} view")
    params = [n for n, _ in member.signature.params]
    for p in params:
        if not model.domain(p):
            raise TestModelError("T002", f"parameter {p!r} has no partitions")
    blocks = _governing(member, view.kind)
    fixtures = dict(model.fixtures)
    default_fixture = model.fixtures[0][0] if model.fixtures else None
    domains = [(n, model.domain(n)) for n in params] + [
        (n, parts) for n, parts in model.param_domains if n not in params
    ]

    raw: list[tuple[str, TestCase]] = []
    for combo in COVERAGE[coverage](domains):
        by_name = {name: part for (name, _), part in zip(domains, combo)}
        labels = {p.maps_to_subspec for p in combo if p.maps_to_subspec is not None}
        if len(labels) > 1:
            raise TestModelError("T005", f"combination {[p.label for p in combo]} maps to {sorted(labels)}")
        bound = next(iter(labels)) if labels else None
        sub = None
        if bound is not None:
            sub = _find_sub(blocks, bound)
            if sub is None:
                raise TestModelError("T003", f"no @sub {bound!r} on {model.subject[0]}#{model.subject[1]}")
        fixture = default_fixture
        for term in model.state_terms:
            if term in by_name:
                fixture = by_name[term].representative
        signals = sub.signals if sub is not None else (blocks[0].signals if blocks and bound is None else ())
        if signals:
            sig = signals[0]
            expectation = Expectation("exception", exception_type=sig.exception_type, message=sig.message)
        else:
            observations = tuple(o for p in combo for o in p.observations)
            todo: tuple[str, ...] = ()
            if not observations:
                ensures = sub.ensures if sub is not None else (blocks[0].ensures if blocks else ())
                todo = tuple(c.raw for c in ensures)
            expectation = Expectation("observations", observations=observations, todo=todo)
        label = bound if bound is not None else " ".join(p.label for p in combo)
        case = TestCase(
            name="",
            subject=model.subject,
            fixture=fixture,
            inputs=tuple(by_name[p].representative for p in params),
            expectation=expectation,
            bound_subspec=bound,
            partitions=tuple(p.label for p in combo),
            fixture_ops=fixtures.get(fixture, ()) if fixture else (),
        )
        raw.append((test_name(member.name, label), case))
    names = unique_names([n for n, _ in raw])
    return [_with_name(c, n) for (_, c), n in zip(raw, names)]


def _with_name(case: TestCase, name: str) -> TestCase:
    import dataclasses

    return dataclasses.replace(case, name=name)


# --- emission ------------------------------------------------------------


def _expectation_json(e: Expectation) -> dict:
    if e.kind == "exception":
        return {"kind": "exception", "type": e.exception_type, "message": e.message}
    out: dict = {"kind": "observations", "observations": [{"call": c, "expected": v} for c, v in e.observations]}
    if e.todo:
        out["todo"] = list(e.todo)
    return out


def emit_manifest(cases: Sequence[TestCase], *, subject: Optional[tuple[str, str]] = None, view: Optional[ViewKind] = None) -> str:
    """Machine-readable case table (JSON, stable key order)."""
    if subject is None and cases:
        subject = cases[0].subject
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "good.test-manifest",
        "subject": {"class": subject[0], "member": subject[1]} if subject else None,
        "view": view.value if view else None,
        "coverage": "all-combinations",
        "cases": [
            {
                "name": c.name,
                "fixture": c.fixture,
                "fixture_ops": [{"op": op, "args": list(args)} for op, args in c.fixture_ops],
                "inputs": list(c.inputs),
                "partitions": list(c.partitions),
                "bound_subspec": c.bound_subspec,
                "expectation": _expectation_json(c.expectation),
            }
            for c in cases
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def suite_class_name(subject: tuple[str, str]) -> str:
    member = re.match(r"[A-Za-z_$][\w$]*", subject[1])
    return subject[0] + _upper_first(member.group() if member else "") + "Test"


def _java_string(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_skeletons(
    cases: Sequence[TestCase], style: str = "junit-like", *, subject: Optional[tuple[str, str]] = None
) -> str:
    """One ``@Test`` method per case; model-supplied values are asserted, the rest become TODOs."""
    if style != "junit-like":
        raise ValueError(f"unknown skeleton style {style!r}")
    if subject is None:
        subject = cases[0].subject if cases else ("Subject", "")
    cls, member_spec = subject
    member = re.match(r"[A-Za-z_$][\w$]*", member_spec)
    member_name = member.group() if member else member_spec
    lines = [
        "import org.junit.jupiter.api.Test;",
        "",
        "import static org.junit.jupiter.api.Assertions.*;",
        "",
        f"public class {suite_class_name(subject)} {{",
    ]
    for c in cases:
        obj = c.fixture or "subject"
        call = f"{obj}.{member_name}({', '.join(c.inputs)})"
        lines += ["", "  @Test", f"  public void {c.name}() {{"]
        lines.append(f"    var {obj} = new {cls}<>();")
        for op, args in c.fixture_ops:
            lines.append(f"    {obj}.{op}({', '.join(args)});")
        e = c.expectation
        if e.kind == "exception":
            lines.append(f"    {e.exception_type} thrown = assertThrows({e.exception_type}.class, () -> {call});")
            if e.message is not None:
                lines.append(f"    assertEquals({_java_string(e.message)}, thrown.getMessage());")
        else:
            wants_result = any(obs == "result" for obs, _ in e.observations)
            lines.append(f"    var result = {call};" if wants_result else f"    {call};")
            for obs, value in e.observations:
                target = "result" if obs == "result" else f"{obj}.{obs}"
                lines.append(f"    assertEquals({value}, {target});")
            for clause in e.todo:
                lines.append(f"    // TODO assert: {clause}")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
