"""Document, spec and view data model shared by every other module.

Everything here is an immutable value.  Structural equality is plain
dataclass equality: source spans and parsed clause trees are derived data
and are excluded from comparison.
"""

from __future__ import annotations

import dataclasses
import enum
import re
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

Span = tuple[tuple[int, int], tuple[int, int]]  # ((line, col), (end_line, end_col)), 1-based


class ViewKind(enum.Enum):
    EXTERNAL = "external"
    INTERNAL = "internal"
    CODE = "code"

    @classmethod
    def parse(cls, text: str) -> "ViewKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown view kind {text!r} (expected external, internal or code)") from None


class Formality(enum.Enum):
    INFORMAL = "informal"
    FORMAL = "formal"
    MIXED = "mixed"


class MemberKind(enum.Enum):
    CONSTRUCTOR = "constructor"
    METHOD = "method"
    ATTRIBUTE = "attribute"


class Visibility(enum.Enum):
    PUBLIC = "public"
    PRIVATE = "private"
    PACKAGE = "package"


@dataclass(frozen=True)
class Clause:
    raw: str
    formality: Formality = Formality.INFORMAL
    expr: Any = field(default=None, compare=False, repr=False)

    @classmethod
    def of(cls, raw: str) -> "Clause":
        """Build a clause from text, classifying it against the expression grammar."""
        from good.expr import classify

        formality, expr = classify(raw)
        return cls(raw, formality, expr)

    def __str__(self) -> str:
        return self.raw


@dataclass(frozen=True)
class SignalClause:
    exception_type: str
    message: Optional[str] = None
    condition: Optional[Clause] = None

    def text(self) -> str:
        out = self.exception_type
        if self.message is not None:
            out += '("' + self.message.replace("\\", "\\\\").replace('"', '\\"') + '")'
        if self.condition is not None:
            out += " " + self.condition.raw
        return out


@dataclass(frozen=True)
class SubSpec:
    label: str
    requires: tuple[Clause, ...] = ()
    ensures: tuple[Clause, ...] = ()
    signals: tuple[SignalClause, ...] = ()
    assignable: tuple[str, ...] = ()


@dataclass(frozen=True)
class SpecBlock:
    desc: Optional[Clause] = None
    invariants: tuple[Clause, ...] = ()
    requires: tuple[Clause, ...] = ()
    ensures: tuple[Clause, ...] = ()
    signals: tuple[SignalClause, ...] = ()
    assignable: tuple[str, ...] = ()
    pure: bool = False
    represents: tuple[Clause, ...] = ()
    subspecs: tuple[SubSpec, ...] = ()

    def is_empty(self) -> bool:
        return self == SpecBlock()

    def subspec(self, label: str) -> Optional[SubSpec]:
        for sub in self.subspecs:
            if sub.label == label:
                return sub
        return None


@dataclass(frozen=True)
class Signature:
    name: str
    params: tuple[tuple[str, str], ...] = ()
    return_type: Optional[str] = None
    declared_type: Optional[str] = None
    # Type arguments written after a constructor name, e.g. ``Bag<T>()``.
    name_type_args: str = ""

    def param_types(self) -> tuple[str, ...]:
        return tuple(t for _, t in self.params)


@dataclass(frozen=True)
class Member:
    kind: MemberKind
    visibility: Visibility
    signature: Signature
    external_spec: Optional[SpecBlock] = None
    internal_spec: Optional[SpecBlock] = None
    # Method body text, or the initializer expression of an attribute.
    body: Optional[str] = None
    modifiers: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return self.signature.name

    @property
    def key(self) -> tuple[str, tuple[str, ...]]:
        return (self.signature.name, self.signature.param_types())

    def node_id(self, class_name: str) -> str:
        if self.kind is MemberKind.ATTRIBUTE:
            return f"{class_name}#{self.name}"
        return f"{class_name}#{self.name}({','.join(self.signature.param_types())})"


@dataclass(frozen=True)
class ClassUnit:
    name: str
    type_params: tuple[str, ...] = ()
    external_spec: Optional[SpecBlock] = None
    internal_spec: Optional[SpecBlock] = None
    members: tuple[Member, ...] = ()
    modifiers: tuple[str, ...] = ("public",)

    def find(self, name: str) -> list[Member]:
        return [m for m in self.members if m.name == name]


@dataclass(frozen=True)
class MasterDocument:
    classes: tuple[ClassUnit, ...] = ()
    source_name: str = ""
    source_spans: Mapping[str, Span] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def find_class(self, name: str) -> Optional[ClassUnit]:
        for cls in self.classes:
            if cls.name == name:
                return cls
        return None

    def span_of(self, node_id: str) -> Span:
        return self.source_spans.get(node_id, ((0, 0), (0, 0)))


@dataclass(frozen=True)
class ViewDocument:
    kind: ViewKind
    classes: tuple[ClassUnit, ...] = ()
    provenance: str = ""

    def find_class(self, name: str) -> Optional[ClassUnit]:
        for cls in self.classes:
            if cls.name == name:
                return cls
        return None


def member_view_membership(member: Member, kind: ViewKind) -> bool:
    if kind is ViewKind.EXTERNAL:
        return member.visibility is Visibility.PUBLIC
    return True


# --- normalization -------------------------------------------------------

_WS = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    return _WS.sub(" ", text.replace("\r\n", "\n").replace("\r", "\n")).strip()


def normalize_body(text: Optional[str]) -> Optional[str]:
    """Canonical opaque body: LF endings, no trailing blanks, common indent removed."""
    if text is None:
        return None
    import textwrap

    lines = [ln.rstrip() for ln in text.replace("\r\n", "\n").replace("\r", "\n").split("\n")]
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    return textwrap.dedent("\n".join(lines))


def _norm_clause(c: Clause) -> Clause:
    raw = normalize_text(c.raw)
    if raw == c.raw and c.expr is not None:
        return c
    return Clause.of(raw)


def _norm_clauses(cs: tuple[Clause, ...]) -> tuple[Clause, ...]:
    return tuple(_norm_clause(c) for c in cs if normalize_text(c.raw))


def _norm_signal(s: SignalClause) -> SignalClause:
    cond = s.condition
    if cond is not None:
        cond = _norm_clause(cond) if normalize_text(cond.raw) else None
    msg = s.message if s.message is None else normalize_text(s.message)
    return SignalClause(s.exception_type.strip(), msg, cond)


def _norm_sub(sub: SubSpec) -> SubSpec:
    return SubSpec(
        label=normalize_text(sub.label),
        requires=_norm_clauses(sub.requires),
        ensures=_norm_clauses(sub.ensures),
        signals=tuple(_norm_signal(s) for s in sub.signals),
        assignable=tuple(a.strip() for a in sub.assignable if a.strip()),
    )


def normalize_spec(block: Optional[SpecBlock]) -> Optional[SpecBlock]:
    if block is None:
        return None
    desc = block.desc
    if desc is not None:
        desc = _norm_clause(desc) if normalize_text(desc.raw) else None
    out = SpecBlock(
        desc=desc,
        invariants=_norm_clauses(block.invariants),
        requires=_norm_clauses(block.requires),
        ensures=_norm_clauses(block.ensures),
        signals=tuple(_norm_signal(s) for s in block.signals),
        assignable=tuple(a.strip() for a in block.assignable if a.strip()),
        pure=block.pure,
        represents=_norm_clauses(block.represents),
        subspecs=tuple(_norm_sub(s) for s in block.subspecs),
    )
    # An empty comment carries no information; it is the same as no comment.
    return None if out.is_empty() else out


def _norm_member(m: Member) -> Member:
    return dataclasses.replace(
        m,
        external_spec=normalize_spec(m.external_spec),
        internal_spec=normalize_spec(m.internal_spec),
        body=normalize_body(m.body),
    )


def normalize_class(cls: ClassUnit) -> ClassUnit:
    return dataclasses.replace(
        cls,
        external_spec=normalize_spec(cls.external_spec),
        internal_spec=normalize_spec(cls.internal_spec),
        members=tuple(_norm_member(m) for m in cls.members),
    )


def normalize(doc: MasterDocument) -> MasterDocument:
    """Canonical form: trimmed, whitespace-collapsed clause text and LF bodies.

    Idempotent.  Spans are carried over unchanged.
    """
    return MasterDocument(
        classes=tuple(normalize_class(c) for c in doc.classes),
        source_name=doc.source_name,
        source_spans=dict(doc.source_spans),
    )


def structurally_equal(a: MasterDocument | ViewDocument, b: MasterDocument | ViewDocument) -> bool:
    return tuple(normalize_class(c) for c in a.classes) == tuple(normalize_class(c) for c in b.classes)
