"""Parser for GOOD-annotated Java-lite sources.

Two grammars meet here.  The declaration grammar is deliberately small:
class headers with one type-parameter list, attributes, constructors and
methods whose bodies are kept as opaque balanced-brace text.  Inside each
``/** ... */`` comment the tag grammar takes over.

Comment placement decides which spec level a comment belongs to:

* a comment directly above a public declaration is its external spec;
* a comment directly after a signature (before its body, ``;``, another
  comment or the end of the class) is its internal spec;
* non-public members have no external spec, so any comment attached to them
  is internal;
* a comment between ``class Name<T>`` and the opening ``{`` is the class's
  internal spec.

Parsing is total.  Whatever cannot be understood is skipped and reported as
a :class:`ParseDiagnostic`.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from typing import Optional

from good.model import (
    Clause,
    ClassUnit,
    MasterDocument,
    Member,
    MemberKind,
    Signature,
    SignalClause,
    SpecBlock,
    SubSpec,
    Visibility,
)

TAGS = ("desc", "inv", "requires", "ensures", "signals", "assignable", "pure", "represents", "sub")
SUB_TAGS = ("requires", "ensures", "signals", "assignable")

MODIFIERS = frozenset(
    {"public", "private", "protected", "static", "final", "abstract", "synchronized", "native", "transient", "volatile"}
)

# code -> (severity, summary); the published catalog
CATALOG = {
    "P001": ("error", "unterminated comment"),
    "P002": ("error", "malformed declaration or signature"),
    "P003": ("error", "@sub block with unbalanced braces"),
    "P004": ("warning", "unknown tag"),
    "P005": ("warning", "@requires inside an attribute spec"),
    "P006": ("warning", "class body not closed before end of input"),
    "P007": ("warning", "doc comment not attached to a declaration"),
    "P008": ("error", "malformed @signals clause"),
    "P009": ("warning", "tag misuse (payload on @pure, repeated @desc, tag not allowed in @sub)"),
    "P010": ("error", "duplicate class or member declaration"),
    "P011": ("warning", "package or import statement ignored"),
}

_IDENT = re.compile(r"[A-Za-z_$][A-Za-z_0-9$]*\Z")
_TAG_AT_START = re.compile(r"@([A-Za-z_]+)(?=\s|$|\{)")
_INLINE_SPLIT = re.compile(r"(?<!\S)(@[A-Za-z_]+|\})(?!\S)")
_SIGNAL = re.compile(r'\s*([A-Za-z_$][\w$.]*)\s*(?:\(\s*(?:"((?:[^"\\]|\\.)*)")?\s*\))?\s*(.*)\Z', re.S)
_GUTTER = re.compile(r"^\s*\*(?!/) ?")


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str
    code: str
    message: str
    span: tuple[tuple[int, int], tuple[int, int]] = ((0, 0), (0, 0))

    @classmethod
    def make(cls, code: str, message: str, span=((0, 0), (0, 0))) -> "ParseDiagnostic":
        return cls(CATALOG[code][0], code, message, span)


# --- spec blocks ---------------------------------------------------------


class _BlockBuilder:
    def __init__(self, line_offset: int, diags: list[ParseDiagnostic]):
        self.line_offset = line_offset
        self.diags = diags
        self.fields: dict = {k: [] for k in ("invariants", "requires", "ensures", "signals", "assignable", "represents")}
        self.desc: Optional[str] = None
        self.pure = False
        self.subs: list[dict] = []
        self.sub: Optional[dict] = None
        self.tag: Optional[str] = None
        self.parts: list[str] = []
        self.tag_line = 0

    def _span(self, line: int):
        ln = line + self.line_offset
        return ((ln, 1), (ln, 1))

    def diag(self, code: str, message: str, line: int) -> None:
        self.diags.append(ParseDiagnostic.make(code, message, self._span(line)))

    def start(self, tag: str, payload: str, line: int) -> None:
        self.flush()
        self.tag = tag
        self.parts = [payload]
        self.tag_line = line

    def text(self, text: str, line: int) -> None:
        if self.tag is None:
            if not text.strip():
                return
            # leading untagged prose is the description
            self.start("desc", text, line)
            return
        self.parts.append(text)

    def open_sub(self, label: str, line: int) -> None:
        self.flush()
        if self.sub is not None:
            self.diag("P003", f"@sub {label!r} opened inside @sub {self.sub['label']!r}", line)
            self.close_sub(line)
        self.sub = {"label": label.strip(), "requires": [], "ensures": [], "signals": [], "assignable": []}

    def close_sub(self, line: int) -> None:
        self.flush()
        if self.sub is None:
            self.diag("P003", "'}' without an open @sub", line)
            return
        self.subs.append(self.sub)
        self.sub = None

    def flush(self) -> None:
        tag, parts = self.tag, self.parts
        self.tag, self.parts = None, []
        if tag is None:
            return
        payload = "\n".join(p.strip() for p in parts).strip()
        line = self.tag_line
        if self.sub is not None and tag not in SUB_TAGS:
            self.diag("P009", f"@{tag} is not allowed inside @sub; attached to the enclosing block", line)
        target = self.sub if (self.sub is not None and tag in SUB_TAGS) else None
        if tag == "desc":
            if self.desc is not None:
                self.diag("P009", "repeated @desc merged into the first", line)
                self.desc = self.desc + "\n" + payload
            else:
                self.desc = payload
        elif tag == "pure":
            if payload:
                self.diag("P009", f"ignoring text after @pure: {payload!r}", line)
            self.pure = True
        elif tag == "signals":
            sig = parse_signal(payload)
            if sig is None:
                self.diag("P008", f"cannot read exception type from @signals {payload!r}", line)
                return
            (target or self.fields)["signals"].append(sig)
        elif tag == "assignable":
            names = [t for t in re.split(r"[\s,]+", payload) if t]
            (target or self.fields)["assignable"].extend(names)
        else:
            if not payload:
                self.diag("P009", f"@{tag} without a clause", line)
                return
            key = {"inv": "invariants"}.get(tag, tag)
            (target or self.fields)[key].append(Clause.of(payload))

    def finish(self, line: int) -> SpecBlock:
        self.flush()
        if self.sub is not None:
            self.diag("P003", f"@sub {self.sub['label']!r} is never closed", line)
            self.close_sub(line)
        return SpecBlock(
            desc=Clause.of(self.desc) if self.desc else None,
            invariants=tuple(self.fields["invariants"]),
            requires=tuple(self.fields["requires"]),
            ensures=tuple(self.fields["ensures"]),
            signals=tuple(self.fields["signals"]),
            assignable=tuple(self.fields["assignable"]),
            pure=self.pure,
            represents=tuple(self.fields["represents"]),
            subspecs=tuple(
                SubSpec(
                    label=s["label"],
                    requires=tuple(s["requires"]),
                    ensures=tuple(s["ensures"]),
                    signals=tuple(s["signals"]),
                    assignable=tuple(s["assignable"]),
                )
                for s in self.subs
            ),
        )


def parse_signal(payload: str) -> Optional[SignalClause]:
    m = _SIGNAL.match(payload)
    if m is None or not payload.strip():
        return None
    exc, msg, rest = m.groups()
    if msg is not None:
        msg = re.sub(r"\\(.)", r"\1", msg)
    rest = rest.strip()
    return SignalClause(exc, msg, Clause.of(rest) if rest else None)


def _split_inline(b: _BlockBuilder, text: str, line: int) -> None:
    """Tags and braces written side by side after ``@sub label {``."""
    pieces = _INLINE_SPLIT.split(text)
    i = 0
    while i < len(pieces):
        piece = pieces[i]
        if i % 2 == 0:
            if piece.strip():
                b.text(piece, line)
            i += 1
            continue
        if piece == "}":
            b.close_sub(line)
            i += 1
            continue
        name = piece[1:]
        following = pieces[i + 1] if i + 1 < len(pieces) else ""
        i += 2
        if name == "sub":
            if "{" not in following:
                b.diag("P003", f"@sub {following.strip()!r} without '{{'", line)
                b.open_sub(following, line)
                continue
            label, _, rest = following.partition("{")
            b.open_sub(label, line)
            if rest.strip():
                b.text(rest, line)
        elif name in TAGS:
            b.start(name, following, line)
        else:
            b.diag("P004", f"unknown tag @{name}", line)
            b.text(piece + following, line)


def strip_gutter(comment: str) -> list[str]:
    text = comment.replace("\r\n", "\n").replace("\r", "\n")
    return [_GUTTER.sub("", ln, count=1).rstrip() for ln in text.split("\n")]


def parse_spec_block(comment: str, line_offset: int = 0) -> tuple[SpecBlock, list[ParseDiagnostic]]:
    """Parse the interior of a ``/** ... */`` comment into a :class:`SpecBlock`."""
    diags: list[ParseDiagnostic] = []
    b = _BlockBuilder(line_offset, diags)
    lines = strip_gutter(comment)
    for lineno, line in enumerate(lines):
        stripped = line.strip()
        if stripped == "}":
            b.close_sub(lineno)
            continue
        m = _TAG_AT_START.match(stripped)
        if m is None:
            b.text(stripped, lineno)
            continue
        name = m.group(1)
        rest = stripped[m.end():]
        if name == "sub":
            if "{" not in rest:
                b.diag("P003", f"@sub {rest.strip()!r} without '{{'", lineno)
                b.open_sub(rest, lineno)
                continue
            label, _, after = rest.partition("{")
            b.open_sub(label, lineno)
            if after.strip():
                _split_inline(b, after, lineno)
        elif name in TAGS:
            b.start(name, rest, lineno)
        else:
            b.diag("P004", f"unknown tag @{name}", lineno)
            b.text(stripped, lineno)
    block = b.finish(max(len(lines) - 1, 0))
    return block, diags


# --- declarations --------------------------------------------------------


def split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside angle brackets, parentheses and brackets."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "<([":
            depth += 1
        elif ch in ">)]":
            depth -= 1
        if depth == 0 and (ch == sep if sep != " " else ch.isspace()):
            out.append("".join(cur))
            cur = []
            continue
        cur.append(ch)
    out.append("".join(cur))
    return [p for p in out if p.strip()] if sep == " " else out


def _norm_type(t: str) -> str:
    t = re.sub(r"\s+", " ", t.strip())
    t = re.sub(r"\s*([<>,\[\]])\s*", r"\1", t)
    return t.replace(",", ", ")


class SignatureError(ValueError):
    pass


_TYPE = re.compile(r"[A-Za-z_$][\w$.]*(?:<[\w$.,?\[\] <>]*>)?(?:\[\])*(?:\.\.\.)?\Z")


def _checked_type(t: str, where: str) -> str:
    t = _norm_type(t)
    if not _TYPE.match(t) or t.count("<") != t.count(">"):
        raise SignatureError(f"cannot read type {t!r} in {where}")
    return t


def _split_modifiers(tokens: list[str]) -> tuple[Visibility, tuple[str, ...], list[str]]:
    mods = []
    i = 0
    while i < len(tokens) and tokens[i] in MODIFIERS:
        mods.append(tokens[i])
        i += 1
    if "public" in mods:
        vis = Visibility.PUBLIC
    elif "private" in mods:
        vis = Visibility.PRIVATE
    else:
        vis = Visibility.PACKAGE
    others = tuple(m for m in mods if m not in ("public", "private"))
    return vis, others, tokens[i:]


def _parse_params(text: str) -> tuple[tuple[str, str], ...]:
    params = []
    if not text.strip():
        return ()
    for raw in split_top(text, ","):
        toks = [t for t in split_top(raw, " ") if t != "final"]
        if len(toks) < 2 or not _IDENT.match(toks[-1]):
            raise SignatureError(f"malformed parameter {raw.strip()!r}")
        params.append((toks[-1], _checked_type(" ".join(toks[:-1]), f"parameter {toks[-1]!r}")))
    names = [n for n, _ in params]
    if len(set(names)) != len(names):
        raise SignatureError("duplicate parameter names")
    return tuple(params)


def _parse_decl(decl: str, class_name: Optional[str] = None) -> tuple[MemberKind, Visibility, tuple[str, ...], Signature]:
    decl = decl.strip()
    attr = decl.endswith(";") or "(" not in decl
    text = decl.rstrip(";").strip()
    if attr:
        vis, mods, rest = _split_modifiers(split_top(text, " "))
        if len(rest) != 2 or not _IDENT.match(rest[1]):
            raise SignatureError(f"cannot read attribute declaration {decl!r}")
        sig = Signature(name=rest[1], declared_type=_checked_type(rest[0], f"attribute {rest[1]!r}"))
        return MemberKind.ATTRIBUTE, vis, mods, sig
    head, _, tail = text.partition("(")
    if not tail.rstrip().endswith(")"):
        raise SignatureError(f"unbalanced parameter list in {decl!r}")
    params = _parse_params(tail.rstrip()[:-1])
    vis, mods, rest = _split_modifiers(split_top(head, " "))
    if len(rest) == 1:
        m = re.match(r"([A-Za-z_$][\w$]*)\s*(<.*>)?\Z", rest[0])
        if m is None:
            raise SignatureError(f"cannot read constructor name in {decl!r}")
        name, targs = m.group(1), _norm_type(m.group(2) or "")
        if class_name is not None and name != class_name:
            raise SignatureError(f"method {name!r} has no return type")
        return MemberKind.CONSTRUCTOR, vis, mods, Signature(name=name, params=params, name_type_args=targs)
    if len(rest) == 2 and _IDENT.match(rest[1]):
        return MemberKind.METHOD, vis, mods, Signature(name=rest[1], params=params, return_type=_checked_type(rest[0], f"method {rest[1]!r}"))
    raise SignatureError(f"cannot read method signature {decl!r}")


def parse_signature(decl: str) -> Signature:
    """Parse one declaration line.  Raises :class:`SignatureError` (P002) when malformed."""
    return _parse_decl(decl)[3]


class _Source:
    def __init__(self, text: str, name: str):
        self.text = text
        self.name = name
        self.pos = 0
        self.line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]
        self.diags: list[ParseDiagnostic] = []
        self.spans: dict = {}

    def loc(self, offset: int) -> tuple[int, int]:
        line = bisect.bisect_right(self.line_starts, offset) - 1
        return (line + 1, offset - self.line_starts[line] + 1)

    def span(self, start: int, end: int):
        return (self.loc(start), self.loc(end))

    def diag(self, code: str, message: str, start: int, end: Optional[int] = None) -> None:
        self.diags.append(ParseDiagnostic.make(code, message, self.span(start, end if end is not None else start)))

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def startswith(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    def skip_trivia(self) -> None:
        """Skip whitespace and non-doc comments."""
        t = self.text
        while self.pos < len(t):
            if t[self.pos].isspace():
                self.pos += 1
            elif self.startswith("//"):
                nl = t.find("\n", self.pos)
                self.pos = len(t) if nl < 0 else nl + 1
            elif self.startswith("/*") and not self.at_doc():
                end = t.find("*/", self.pos + 2)
                if end < 0:
                    self.diag("P001", "unterminated comment", self.pos)
                    self.pos = len(t)
                else:
                    self.pos = end + 2
            else:
                break

    def at_doc(self) -> bool:
        return self.startswith("/**") and not self.startswith("/**/")

    def read_doc(self) -> tuple[Optional[SpecBlock], int, int]:
        start = self.pos
        end = self.text.find("*/", self.pos + 3)
        if end < 0:
            self.diag("P001", "unterminated doc comment", start)
            interior = self.text[start + 3:]
            self.pos = len(self.text)
        else:
            interior = self.text[start + 3:end]
            self.pos = end + 2
        block, diags = parse_spec_block(interior, line_offset=self.loc(start)[0] - 1)
        self.diags.extend(diags)
        return (None if block.is_empty() else block), start, self.pos

    def skip_balanced(self, open_ch: str = "{", close_ch: str = "}") -> str:
        """Consume a balanced group starting at the current ``open_ch``; return its interior."""
        t = self.text
        assert t[self.pos] == open_ch
        start = self.pos
        depth = 0
        i = self.pos
        while i < len(t):
            ch = t[i]
            if ch in "\"'":
                j = i + 1
                while j < len(t) and t[j] != ch and t[j] != "\n":
                    j += 2 if t[j] == "\\" else 1
                i = j + 1
                continue
            if t.startswith("//", i):
                nl = t.find("\n", i)
                i = len(t) if nl < 0 else nl + 1
                continue
            if t.startswith("/*", i):
                end = t.find("*/", i + 2)
                i = len(t) if end < 0 else end + 2
                continue
            if ch == open_ch:
                depth += 1
            elif ch == close_ch:
                depth -= 1
                if depth == 0:
                    self.pos = i + 1
                    return t[start + 1:i]
            i += 1
        self.diag("P002", f"unbalanced {open_ch!r}", start)
        self.pos = len(t)
        return t[start + 1:]

    def read_until(self, stops: str) -> str:
        t = self.text
        i = self.pos
        while i < len(t) and t[i] not in stops and not t.startswith("/*", i) and not t.startswith("//", i):
            i += 1
        out = t[self.pos:i]
        self.pos = i
        return out


def _merge(a: Optional[SpecBlock], b: Optional[SpecBlock]) -> Optional[SpecBlock]:
    if a is None or b is None:
        return a or b
    desc = a.desc
    if b.desc is not None:
        desc = b.desc if desc is None else Clause.of(desc.raw + "\n" + b.desc.raw)
    return SpecBlock(
        desc=desc,
        invariants=a.invariants + b.invariants,
        requires=a.requires + b.requires,
        ensures=a.ensures + b.ensures,
        signals=a.signals + b.signals,
        assignable=a.assignable + b.assignable,
        pure=a.pure or b.pure,
        represents=a.represents + b.represents,
        subspecs=a.subspecs + b.subspecs,
    )


def _param_list_end(t: str, pos: int) -> Optional[int]:
    """Index of the ``)`` closing the list opened at ``pos``; None if a brace or ``;`` comes first."""
    depth = 0
    for i in range(pos, len(t)):
        ch = t[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return i
        elif ch in "{};":
            return None
    return None


def _parse_member(src: _Source, cls_name: str, pending: Optional[SpecBlock]) -> Optional[Member]:
    t = src.text
    start = src.pos
    head = src.read_until("(;{=}\n")
    stop = t[src.pos] if src.pos < len(t) else ""
    body: Optional[str] = None
    trailing: Optional[SpecBlock] = None
    if stop == "(":
        close = _param_list_end(t, src.pos)
        if close is None:
            # resynchronise on the body or terminator that follows
            src.diag("P002", f"unbalanced '(' in {head.strip()!r}", start)
            src.pos += 1
            src.read_until("{;}")
            if src.startswith("{"):
                src.skip_balanced()
            elif src.startswith(";"):
                src.pos += 1
            return None
        params = t[src.pos + 1:close]
        src.pos = close + 1
        decl = head + "(" + params + ")"
        end = src.pos
        save = src.pos
        src.skip_trivia()
        if src.startswith("{"):
            body = src.skip_balanced()
        elif src.startswith(";"):
            src.pos += 1
        elif src.at_doc():
            doc_start = src.pos
            mark = len(src.diags)
            block, _, _ = src.read_doc()
            after_doc = src.pos
            src.skip_trivia()
            if src.startswith("{"):
                trailing = block
                body = src.skip_balanced()
            elif src.startswith(";"):
                trailing = block
                src.pos += 1
            elif src.eof() or src.startswith("}") or src.at_doc():
                trailing = block
                src.pos = after_doc
            else:
                # the comment belongs to the next declaration
                src.pos = doc_start
                del src.diags[mark:]
        else:
            src.pos = save
        end = max(end, src.pos)
    elif stop == ";":
        src.pos += 1
        decl = head + ";"
        end = src.pos
    elif stop == "=":
        src.pos += 1
        init_start = src.pos
        init = []
        while not src.eof() and t[src.pos] != ";":
            if t[src.pos] in "({[":
                close = {"(": ")", "{": "}", "[": "]"}[t[src.pos]]
                init.append(t[src.pos] + src.skip_balanced(t[src.pos], close) + close)
            else:
                init.append(t[src.pos])
                src.pos += 1
        if src.eof():
            src.diag("P002", "attribute initializer without ';'", init_start)
        else:
            src.pos += 1
        body = "".join(init).strip()
        decl = head + ";"
        end = src.pos
    else:
        if stop == "{":
            src.skip_balanced()
            src.diag("P002", f"unsupported block after {head.strip()!r}", start, src.pos)
            return None
        decl = head
        end = src.pos
        if not head.strip():
            src.diag("P002", f"unexpected character {stop!r}", start)
            src.pos += 1
            return None
    try:
        kind, vis, mods, sig = _parse_decl(decl, cls_name)
    except SignatureError as exc:
        src.diag("P002", str(exc), start, end)
        return None
    if vis is Visibility.PUBLIC:
        ext, internal = pending, trailing
    else:
        if pending is not None and trailing is not None:
            src.diag("P009", f"two comments on non-public {sig.name!r} merged", start)
        ext, internal = None, _merge(pending, trailing)
    if kind is MemberKind.ATTRIBUTE:
        for block in (ext, internal):
            if block is not None and (block.requires or any(s.requires for s in block.subspecs)):
                src.diag("P005", f"@requires on attribute {sig.name!r}", start)
    member = Member(kind, vis, sig, ext, internal, body, mods)
    src.spans[member.node_id(cls_name)] = src.span(start, end)
    return member


_CLASS_HEAD = re.compile(r"((?:[A-Za-z]+\s+)*)class\s+([A-Za-z_$][\w$]*)\s*(<.*>)?\s*\Z", re.S)


def _parse_class(src: _Source, pending: Optional[SpecBlock], classes: list[ClassUnit]) -> None:
    start = src.pos
    head = src.read_until("{;}")
    while src.startswith("//") or (src.startswith("/*") and not src.at_doc()):
        src.skip_trivia()
        head += " " + src.read_until("{;}")
    stripped = head.strip()
    if re.match(r"(package|import)\b", stripped):
        if src.startswith(";"):
            src.pos += 1
        src.diag("P011", f"ignored: {stripped.split(chr(10))[0]}", start)
        return
    m = _CLASS_HEAD.match(stripped)
    internal = None
    if m is not None and src.at_doc():
        internal, _, _ = src.read_doc()
        src.skip_trivia()
    if m is None or not src.startswith("{"):
        if src.startswith("{"):
            src.skip_balanced()
        elif not src.eof():
            src.pos += 1
        src.diag("P002", f"malformed class header {stripped[:60]!r}", start, src.pos)
        return
    mods = tuple(m.group(1).split())
    name = m.group(2)
    tparams = tuple(_norm_type(p) for p in split_top(m.group(3)[1:-1], ",")) if m.group(3) else ()
    src.pos += 1
    members: list[Member] = []
    seen: set = set()
    member_pending: Optional[SpecBlock] = None
    pending_at = 0
    closed = False
    while True:
        src.skip_trivia()
        if src.eof():
            break
        if src.startswith("}"):
            src.pos += 1
            closed = True
            break
        if src.at_doc():
            if member_pending is not None:
                src.diag("P007", "doc comment is followed by another doc comment", pending_at)
            pending_at = src.pos
            member_pending, _, _ = src.read_doc()
            continue
        before = src.pos
        member = _parse_member(src, name, member_pending)
        member_pending = None
        if member is not None:
            if member.key in seen:
                src.diag("P010", f"duplicate member {member.node_id(name)}", before)
                continue
            seen.add(member.key)
            members.append(member)
        if src.pos == before:
            src.pos += 1
    if member_pending is not None:
        src.diag("P007", "doc comment at the end of the class body", pending_at)
    if not closed:
        src.diag("P006", f"class {name} is not closed before end of input", start, src.pos)
    if any(c.name == name for c in classes):
        src.diag("P010", f"duplicate class {name}", start)
        return
    src.spans[name] = src.span(start, src.pos)
    classes.append(ClassUnit(name, tparams, pending, internal, tuple(members), mods))


def parse_master(source: str, source_name: str = "<string>") -> tuple[MasterDocument, list[ParseDiagnostic]]:
    """Parse a master source file into a document plus diagnostics.  Never raises on bad input."""
    src = _Source(source.replace("\r\n", "\n").replace("\r", "\n"), source_name)
    classes: list[ClassUnit] = []
    pending: Optional[SpecBlock] = None
    pending_at = 0
    while True:
        src.skip_trivia()
        if src.eof():
            break
        if src.at_doc():
            if pending is not None:
                src.diag("P007", "doc comment is followed by another doc comment", pending_at)
            pending_at = src.pos
            pending, _, _ = src.read_doc()
            continue
        before = src.pos
        _parse_class(src, pending, classes)
        pending = None
        if src.pos == before:
            src.pos += 1
    if pending is not None:
        src.diag("P007", "doc comment at end of input", pending_at)
    return MasterDocument(tuple(classes), source_name, src.spans), src.diags
