"""Structural consistency rules and refinement obligations.

Obligations are reports.  Clauses may be natural language, so the only
discharge attempted here is syntactic: a consequent already contained in the
antecedents (after normalization) is trivially discharged, and everything
else is left for manual review.
"""

from __future__ import annotations

import dataclasses
import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional

from good import expr as ex
from good.model import (
    Clause,
    ClassUnit,
    Formality,
    MasterDocument,
    Member,
    MemberKind,
    SignalClause,
    SpecBlock,
    Visibility,
    normalize_text,
)

CATALOG = {
    "E001": ("error", "public member missing external @desc"),
    "E002": ("error", "@pure together with a non-empty @assignable"),
    "E003": ("error", "@represents inside an external spec"),
    "E004": ("error", "@signals in a @sub whose @requires is empty"),
    "E005": ("error", "flat @requires/@ensures/@signals mixed with @sub blocks"),
    "E006": ("error", "duplicate @sub labels"),
    "W001": ("warning", "non-public member lacking any @desc"),
    "W002": ("warning", "public method with external spec but no internal spec (identity refinement assumed)"),
    "W003": ("warning", "@sub preconditions not checkably disjoint"),
    "W004": ("warning", "@sub label without a counterpart at the other spec level"),
    "W005": ("warning", "clause uses \\-forms but does not parse"),
}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: str
    subject: tuple[str, Optional[str]]
    message: str
    span: tuple[tuple[int, int], tuple[int, int]] = ((0, 0), (0, 0))

    @property
    def is_error(self) -> bool:
        return self.severity == "error"


class Rule(enum.Enum):
    R1_INVARIANT = "R1_invariant"
    R2_PRECONDITION = "R2_precondition"
    R3_POSTCONDITION = "R3_postcondition"


class Status(enum.Enum):
    TRIVIALLY_DISCHARGED = "trivially_discharged"
    MANUAL = "manual"


@dataclass(frozen=True)
class Obligation:
    rule: Rule
    subject: tuple[str, Optional[str]]
    antecedents: tuple[Clause, ...]
    consequent: tuple[Clause, ...]
    status: Status = Status.MANUAL
    subspec: Optional[str] = None


class Disjointness(enum.Enum):
    DISJOINT = "disjoint"
    OVERLAPPING = "overlapping"
    UNKNOWN = "unknown"


# --- interval fragment ---------------------------------------------------

_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "==": "==", "!=": "!="}


def _const(e) -> Optional[int]:
    if isinstance(e, ex.Num):
        return e.value
    if isinstance(e, ex.Unary) and e.op == "-":
        inner = _const(e.operand)
        return None if inner is None else -inner
    return None


def _conjuncts(e) -> list:
    if isinstance(e, ex.Binary) and e.op == "&&":
        return _conjuncts(e.left) + _conjuncts(e.right)
    if isinstance(e, ex.Chain):
        return [ex.Binary(op, a, b) for op, a, b in zip(e.ops, e.operands, e.operands[1:])]
    return [e]


class _Outside(Exception):
    pass


def _constraints(e) -> tuple[object, list[tuple[str, int]]]:
    """(term, [(op, constant)]) for a conjunction of term-vs-constant comparisons."""
    term = None
    out = []
    for c in _conjuncts(e):
        if not isinstance(c, ex.Binary) or c.op not in _FLIP:
            raise _Outside
        lc, rc = _const(c.left), _const(c.right)
        if rc is not None and lc is None:
            t, op, k = c.left, c.op, rc
        elif lc is not None and rc is None:
            t, op, k = c.right, _FLIP[c.op], lc
        else:
            raise _Outside
        if term is None:
            term = t
        elif t != term:
            raise _Outside
        out.append(("=" if op == "==" else op, k))
    return term, out


def _interval(cons: list[tuple[str, int]]) -> tuple[float, float, set[int]]:
    lo, hi = -math.inf, math.inf
    excluded: set[int] = set()
    for op, k in cons:
        if op == ">":
            lo = max(lo, k + 1)
        elif op == ">=":
            lo = max(lo, k)
        elif op == "<":
            hi = min(hi, k - 1)
        elif op == "<=":
            hi = min(hi, k)
        elif op == "=":
            lo, hi = max(lo, k), min(hi, k)
        else:
            excluded.add(k)
    return lo, hi, excluded


def _has_integer(lo: float, hi: float, excluded: set[int]) -> bool:
    if lo > hi:
        return False
    if math.isinf(lo) or math.isinf(hi):
        return True
    # finitely many candidates; only the excluded ones can be missing
    return (int(hi) - int(lo) + 1) > len({k for k in excluded if lo <= k <= hi})


def check_disjoint_interval(c1, c2) -> Disjointness:
    """Decide disjointness of two conjunctions of comparisons of one shared integer term."""
    if c1 is None or c2 is None:
        return Disjointness.UNKNOWN
    try:
        t1, k1 = _constraints(c1)
        t2, k2 = _constraints(c2)
    except _Outside:
        return Disjointness.UNKNOWN
    if t1 != t2:
        return Disjointness.UNKNOWN
    if _has_integer(*_interval(k1 + k2)):
        return Disjointness.OVERLAPPING
    return Disjointness.DISJOINT


def conjunction(clauses: Iterable[Clause]):
    """One expression for a list of clauses, or None if any clause is not formal."""
    exprs = []
    for c in clauses:
        if c.formality is not Formality.FORMAL or c.expr is None:
            return None
        exprs.append(c.expr)
    if not exprs:
        return None
    out = exprs[0]
    for e in exprs[1:]:
        out = ex.Binary("&&", out, e)
    return out


# --- structural checks ---------------------------------------------------


def _diag(code: str, subject: tuple[str, Optional[str]], message: str, span) -> Diagnostic:
    return Diagnostic(code, CATALOG[code][0], subject, message, span)


def _block_clauses(block: SpecBlock) -> list[Clause]:
    out = [*block.invariants, *block.requires, *block.ensures, *block.represents]
    out.extend(s.condition for s in block.signals if s.condition is not None)
    for sub in block.subspecs:
        out.extend([*sub.requires, *sub.ensures])
        out.extend(s.condition for s in sub.signals if s.condition is not None)
    return out


def _check_block(
    block: Optional[SpecBlock], level: str, subject: tuple[str, Optional[str]], span, out: list[Diagnostic]
) -> None:
    if block is None:
        return
    where = ".".join(p for p in subject if p)
    if block.pure and (block.assignable or any(s.assignable for s in block.subspecs)):
        out.append(_diag("E002", subject, f"{where} is @pure but declares @assignable {', '.join(block.assignable)}", span))
    if level == "external" and block.represents:
        out.append(_diag("E003", subject, f"{where} has @represents in its external spec", span))
    for sub in block.subspecs:
        if sub.signals and not sub.requires:
            out.append(_diag("E004", subject, f"{where} @sub {sub.label!r} signals without a @requires", span))
    if block.subspecs and (block.requires or block.ensures or block.signals):
        out.append(_diag("E005", subject, f"{where} mixes flat clauses with @sub blocks", span))
    labels = [s.label for s in block.subspecs]
    for label in sorted({x for x in labels if labels.count(x) > 1}):
        out.append(_diag("E006", subject, f"{where} repeats @sub label {label!r}", span))
    for a, b in itertools.combinations(block.subspecs, 2):
        verdict = check_disjoint_interval(conjunction(a.requires), conjunction(b.requires))
        if verdict is not Disjointness.DISJOINT:
            out.append(
                _diag("W003", subject, f"{where} @sub {a.label!r} and {b.label!r} preconditions are {verdict.value}", span)
            )
    for c in _block_clauses(block):
        if c.formality is Formality.MIXED:
            out.append(_diag("W005", subject, f"{where} clause does not parse: {c.raw}", span))


def _check_member(cls: ClassUnit, m: Member, doc: Optional[MasterDocument], out: list[Diagnostic]) -> None:
    subject = (cls.name, m.name)
    span = doc.span_of(m.node_id(cls.name)) if doc is not None else ((0, 0), (0, 0))
    if m.visibility is Visibility.PUBLIC:
        if m.external_spec is None or m.external_spec.desc is None:
            out.append(_diag("E001", subject, f"{cls.name}.{m.name} has no external @desc", span))
        if m.kind is not MemberKind.ATTRIBUTE and m.external_spec is not None and m.internal_spec is None:
            out.append(_diag("W002", subject, f"{cls.name}.{m.name} has no internal spec; identity refinement assumed", span))
    elif all(b is None or b.desc is None for b in (m.external_spec, m.internal_spec)):
        out.append(_diag("W001", subject, f"{cls.name}.{m.name} has no @desc", span))
    _check_block(m.external_spec, "external", subject, span, out)
    _check_block(m.internal_spec, "internal", subject, span, out)
    if m.external_spec is not None and m.internal_spec is not None:
        ext = {s.label for s in m.external_spec.subspecs}
        internal = {s.label for s in m.internal_spec.subspecs}
        if ext or internal:
            for label in sorted(ext ^ internal):
                side = "external" if label in ext else "internal"
                out.append(_diag("W004", subject, f"{cls.name}.{m.name} {side} @sub {label!r} has no counterpart", span))


def check(doc: MasterDocument) -> list[Diagnostic]:
    """Run every rule over a (normalized) document; deterministic order."""
    out: list[Diagnostic] = []
    for cls in doc.classes:
        span = doc.span_of(cls.name)
        _check_block(cls.external_spec, "external", (cls.name, None), span, out)
        _check_block(cls.internal_spec, "internal", (cls.name, None), span, out)
        for m in cls.members:
            _check_member(cls, m, doc, out)
    return out


# --- refinement obligations ----------------------------------------------


def _key(c: Clause) -> str:
    return normalize_text(c.raw)


def discharge_trivial(ob: Obligation) -> Obligation:
    ante = {_key(c) for c in ob.antecedents}
    ok = all(_key(c) in ante for c in ob.consequent)
    return dataclasses.replace(ob, status=Status.TRIVIALLY_DISCHARGED if ok else Status.MANUAL)


def _signal_clause(s: SignalClause) -> Clause:
    return Clause.of("signals " + s.text())


def representation(cls: ClassUnit) -> tuple[Clause, ...]:
    """Every @represents clause of the class, class-level first, then per member."""
    out = list(cls.internal_spec.represents if cls.internal_spec else ())
    for m in cls.members:
        if m.internal_spec is not None:
            out.extend(m.internal_spec.represents)
    return tuple(out)


def _pre_post(block: SpecBlock) -> list[tuple[Optional[str], tuple[Clause, ...], tuple[Clause, ...]]]:
    if block.subspecs:
        return [(s.label, s.requires, s.ensures + tuple(_signal_clause(x) for x in s.signals)) for s in block.subspecs]
    return [(None, block.requires, block.ensures + tuple(_signal_clause(x) for x in block.signals))]


def refinement_obligations(cls: ClassUnit) -> list[Obligation]:
    """R1 per class; R2 and R3 per public method or constructor carrying an external spec."""
    reps = representation(cls)
    internal_inv = cls.internal_spec.invariants if cls.internal_spec else ()
    external_inv = cls.external_spec.invariants if cls.external_spec else ()
    obs = [discharge_trivial(Obligation(Rule.R1_INVARIANT, (cls.name, None), reps + internal_inv, external_inv))]
    for m in cls.members:
        if m.kind is MemberKind.ATTRIBUTE or m.visibility is not Visibility.PUBLIC or m.external_spec is None:
            continue
        subject = (cls.name, m.name)
        ext = _pre_post(m.external_spec)
        if m.internal_spec is None:
            # identity refinement: the external spec is its own implementation spec
            for label, pre, post in ext:
                obs.append(discharge_trivial(Obligation(Rule.R2_PRECONDITION, subject, pre, pre, subspec=label)))
                obs.append(discharge_trivial(Obligation(Rule.R3_POSTCONDITION, subject, post, post, subspec=label)))
            continue
        internal = {label: (pre, post) for label, pre, post in _pre_post(m.internal_spec)}
        pairs = []
        if list(internal) == [None]:
            # a flat side is paired with every @sub of the other side
            pairs = [(label, epre, epost, *internal[None]) for label, epre, epost in ext]
        elif [label for label, _, _ in ext] == [None]:
            pairs = [(label, ext[0][1], ext[0][2], ipre, ipost) for label, (ipre, ipost) in internal.items()]
        else:
            # unmatched labels are reported as W004 by check()
            pairs = [(label, epre, epost, *internal[label]) for label, epre, epost in ext if label in internal]
        for label, epre, epost, ipre, ipost in pairs:
            obs.append(discharge_trivial(Obligation(Rule.R2_PRECONDITION, subject, reps + epre, ipre, subspec=label)))
            obs.append(discharge_trivial(Obligation(Rule.R3_POSTCONDITION, subject, reps + ipost, epost, subspec=label)))
    return obs


def document_obligations(doc: MasterDocument) -> list[Obligation]:
    return [ob for cls in doc.classes for ob in refinement_obligations(cls)]
