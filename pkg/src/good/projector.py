"""Projection of a master document onto stakeholder views, plus rendering and diffing."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from good.model import (
    ClassUnit,
    MasterDocument,
    Member,
    MemberKind,
    SpecBlock,
    SubSpec,
    ViewDocument,
    ViewKind,
    Visibility,
    member_view_membership,
    normalize_class,
)

INDENT = "  "


def _strip_represents(block: Optional[SpecBlock]) -> Optional[SpecBlock]:
    if block is None or not block.represents:
        return block
    out = dataclasses.replace(block, represents=())
    return None if out.is_empty() else out


def _project_member(m: Member, kind: ViewKind) -> Member:
    if kind is ViewKind.EXTERNAL:
        return dataclasses.replace(m, external_spec=_strip_represents(m.external_spec), internal_spec=None, body=None)
    if kind is ViewKind.INTERNAL:
        return dataclasses.replace(m, body=None)
    return m


def _project_class(cls: ClassUnit, kind: ViewKind) -> ClassUnit:
    members = tuple(_project_member(m, kind) for m in cls.members if member_view_membership(m, kind))
    if kind is ViewKind.EXTERNAL:
        return dataclasses.replace(
            cls, external_spec=_strip_represents(cls.external_spec), internal_spec=None, members=members
        )
    return dataclasses.replace(cls, members=members)


def project(doc: MasterDocument, kind: ViewKind) -> ViewDocument:
    classes = tuple(_project_class(normalize_class(c), kind) for c in doc.classes)
    return ViewDocument(kind, classes, doc.source_name)


# --- rendering -----------------------------------------------------------


def _comment(block: SpecBlock, indent: str) -> list[str]:
    lines = [indent + "/**"]

    def tag(text: str, depth: int = 0) -> None:
        lines.append(f"{indent} * {INDENT * depth}{text}")

    if block.desc is not None:
        tag("@desc " + block.desc.raw)
    for c in block.invariants:
        tag("@inv " + c.raw)
    for c in block.represents:
        tag("@represents " + c.raw)
    if block.pure:
        tag("@pure")
    if block.assignable:
        tag("@assignable " + ", ".join(block.assignable))
    for c in block.requires:
        tag("@requires " + c.raw)
    for c in block.ensures:
        tag("@ensures " + c.raw)
    for s in block.signals:
        tag("@signals " + s.text())
    for sub in block.subspecs:
        _sub(sub, tag)
    lines.append(indent + " */")
    return lines


def _sub(sub: SubSpec, tag) -> None:
    tag(f"@sub {sub.label} {{")
    if sub.assignable:
        tag("@assignable " + ", ".join(sub.assignable), 1)
    for c in sub.requires:
        tag("@requires " + c.raw, 1)
    for c in sub.ensures:
        tag("@ensures " + c.raw, 1)
    for s in sub.signals:
        tag("@signals " + s.text(), 1)
    tag("}")


def _decl(m: Member) -> str:
    words = []
    if m.visibility is not Visibility.PACKAGE:
        words.append(m.visibility.value)
    words.extend(m.modifiers)
    sig = m.signature
    if m.kind is MemberKind.ATTRIBUTE:
        words.extend([sig.declared_type or "", sig.name])
        text = " ".join(words)
        return text + (f" = {m.body};" if m.body is not None else ";")
    if m.kind is MemberKind.METHOD:
        words.append(sig.return_type or "void")
    params = ", ".join(f"{t} {n}" for n, t in sig.params)
    words.append(f"{sig.name}{sig.name_type_args}({params})")
    return " ".join(words)


def _body(body: str, indent: str) -> list[str]:
    lines = [indent + "{"]
    for ln in body.split("\n") if body else []:
        lines.append((indent + INDENT + ln) if ln else "")
    lines.append(indent + "}")
    return lines


def render_class(cls: ClassUnit) -> list[str]:
    out: list[str] = []
    if cls.external_spec is not None:
        out.extend(_comment(cls.external_spec, ""))
    head = " ".join([*cls.modifiers, "class", cls.name + (f"<{', '.join(cls.type_params)}>" if cls.type_params else "")])
    if cls.internal_spec is not None:
        out.append(head)
        out.extend(_comment(cls.internal_spec, ""))
        out.append("{")
    else:
        out.append(head + " {")
    open_signature = False  # a bare signature whose internal comment is already written
    for m in cls.members:
        out.append("")
        lead = m.external_spec if m.visibility is Visibility.PUBLIC else m.internal_spec
        trail = m.internal_spec if m.visibility is Visibility.PUBLIC else None
        if lead is not None:
            out.extend(_comment(lead, INDENT))
        elif open_signature:
            # keeps the previous member's trailing comment from being read as ours
            out.extend([INDENT + "/**", INDENT + " */"])
        out.append(INDENT + _decl(m))
        open_signature = False
        if m.kind is MemberKind.ATTRIBUTE:
            continue
        if trail is not None:
            out.extend(_comment(trail, INDENT + INDENT))
        if m.body is not None:
            out.extend(_body(m.body, INDENT))
        elif trail is not None:
            open_signature = True
    out.append("}")
    return out


def render(view: ViewDocument) -> str:
    """Deterministic text in listing style; empty view renders as empty text."""
    if not view.classes:
        return ""
    chunks = ["\n".join(render_class(c)) for c in view.classes]
    return "\n\n".join(chunks) + "\n"


def view_filename(class_name: str, kind: ViewKind) -> str:
    return f"{class_name}.{kind.value}.java"


def write_views(view: ViewDocument, out_dir: Path) -> list[Path]:
    """Write one ``<Class>.<kind>.java`` file per class."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for cls in view.classes:
        path = out_dir / view_filename(cls.name, view.kind)
        path.write_text(render(ViewDocument(view.kind, (cls,), view.provenance)), encoding="utf-8")
        written.append(path)
    return written


# --- diffing -------------------------------------------------------------


@dataclass(frozen=True)
class ViewDelta:
    change: str  # added, removed, changed, not_permitted
    class_name: str
    member: Optional[str]
    field: str
    expected: object = None
    actual: object = None

    def describe(self) -> str:
        where = self.class_name + (f".{self.member}" if self.member else "")
        return f"{where}: {self.field} {self.change}"


class ViewKindMismatch(ValueError):
    pass


_SPEC_FIELDS = ("desc", "invariants", "requires", "ensures", "signals", "assignable", "pure", "represents", "subspecs")


def _diff_spec(
    exp: Optional[SpecBlock], act: Optional[SpecBlock], cls: str, member: Optional[str], level: str
) -> list[ViewDelta]:
    out = []
    e = exp or SpecBlock()
    a = act or SpecBlock()
    for name in _SPEC_FIELDS:
        ev, av = getattr(e, name), getattr(a, name)
        if ev == av:
            continue
        field = name if level == "external" else f"internal.{name}"
        empty_e = ev in (None, (), False)
        empty_a = av in (None, (), False)
        change = "removed" if empty_a else "added" if empty_e else "changed"
        out.append(ViewDelta(change, cls, member, field, ev, av))
    return out


def diff_views(expected: ViewDocument, actual: ViewDocument) -> list[ViewDelta]:
    """Structural differences between two views of the same kind, after normalization."""
    if expected.kind is not actual.kind:
        raise ViewKindMismatch(f"cannot diff a {expected.kind.value} view against a {actual.kind.value} view")
    out: list[ViewDelta] = []
    exp_classes = {c.name: normalize_class(c) for c in expected.classes}
    act_classes = {c.name: normalize_class(c) for c in actual.classes}
    for name in exp_classes:
        if name not in act_classes:
            out.append(ViewDelta("removed", name, None, "class"))
    for name, acls in act_classes.items():
        ecls = exp_classes.get(name)
        if ecls is None:
            out.append(ViewDelta("added", name, None, "class"))
            continue
        out.extend(_diff_class(ecls, acls, actual.kind))
    return out


def _diff_class(e: ClassUnit, a: ClassUnit, kind: ViewKind) -> list[ViewDelta]:
    out: list[ViewDelta] = []
    name = e.name
    for fname in ("type_params", "modifiers"):
        if getattr(e, fname) != getattr(a, fname):
            out.append(ViewDelta("changed", name, None, fname, getattr(e, fname), getattr(a, fname)))
    out.extend(_diff_spec(e.external_spec, a.external_spec, name, None, "external"))
    out.extend(_diff_spec(e.internal_spec, a.internal_spec, name, None, "internal"))
    if kind is ViewKind.EXTERNAL and a.internal_spec is not None:
        out.append(ViewDelta("not_permitted", name, None, "internal_spec"))
    emembers = {m.key: m for m in e.members}
    amembers = {m.key: m for m in a.members}
    overloaded = {m.name for m in e.members + a.members if sum(x.name == m.name for x in e.members) > 1}

    def label(m: Member) -> str:
        if m.name in overloaded:
            return f"{m.name}({', '.join(m.signature.param_types())})"
        return m.name

    for key, em in emembers.items():
        if key not in amembers:
            out.append(ViewDelta("removed", name, label(em), "member"))
    for key, am in amembers.items():
        if not member_view_membership(am, kind):
            out.append(ViewDelta("not_permitted", name, label(am), "member", None, am.visibility.value))
        if kind is ViewKind.EXTERNAL and (am.internal_spec is not None or am.body is not None):
            out.append(ViewDelta("not_permitted", name, label(am), "internal_spec" if am.internal_spec else "body"))
        em = emembers.get(key)
        if em is None:
            out.append(ViewDelta("added", name, label(am), "member"))
            continue
        for fname in ("kind", "visibility", "modifiers"):
            if getattr(em, fname) != getattr(am, fname):
                out.append(ViewDelta("changed", name, label(am), fname, getattr(em, fname), getattr(am, fname)))
        if em.signature != am.signature:
            out.append(ViewDelta("changed", name, label(am), "signature", em.signature, am.signature))
        out.extend(_diff_spec(em.external_spec, am.external_spec, name, label(am), "external"))
        out.extend(_diff_spec(em.internal_spec, am.internal_spec, name, label(am), "internal"))
        if em.body != am.body:
            change = "removed" if am.body is None else "added" if em.body is None else "changed"
            out.append(ViewDelta(change, name, label(am), "body", em.body, am.body))
    common = set(emembers) & set(amembers)
    if [m.key for m in e.members if m.key in common] != [m.key for m in a.members if m.key in common]:
        out.append(ViewDelta("changed", name, None, "member_order"))
    return out
