"""Expression mini-grammar for formal clauses.

Covers what the annotation corpus actually writes::

    \\forall e: T | e != elem :: B(e) = \\old(B(e))
    \\num_of i: int | 0 <= i < lst.size() :: lst[i] = e
    \\sum e: T :: B(e)
    \\result = ...

Parsing is best effort.  :func:`parse_clause_expression` returns ``None``
for anything outside the grammar and never raises.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from good.model import Formality


@dataclass(frozen=True)
class Name:
    id: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class Result:
    pass


@dataclass(frozen=True)
class Old:
    expr: "Expr"


@dataclass(frozen=True)
class Call:
    func: "Expr"
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Index:
    target: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class Field:
    target: "Expr"
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Chain:
    """Chained comparison such as ``0 <= i < n``."""

    ops: tuple[str, ...]
    operands: tuple["Expr", ...]


@dataclass(frozen=True)
class Quantifier:
    kind: str  # forall, exists, num_of, sum, product, min, max
    binder: str
    binder_type: Optional[str]
    guard: Optional["Expr"]
    body: "Expr"


Expr = Union[Name, Num, Str, Result, Old, Call, Index, Field, Unary, Binary, Chain, Quantifier]

QUANTIFIERS = frozenset({"forall", "exists", "num_of", "sum", "product", "min", "max"})
RELATIONAL = ("=", "==", "!=", "<", "<=", ">", ">=")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<kw>\\[A-Za-z_]+)
  | (?P<num>\d+)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<id>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><==>|==>|<==|::|==|!=|<=|>=|&&|\|\||[-+*/%<>=!|:.,()\[\]])
    """,
    re.VERBOSE,
)

# binding power of infix operators
_INFIX = {
    "<==>": 1,
    "==>": 2,
    "<==": 2,
    "||": 3,
    "&&": 4,
    **{op: 5 for op in RELATIONAL},
    "+": 6,
    "-": 6,
    "*": 7,
    "/": 7,
    "%": 7,
}
_RIGHT_ASSOC = {"==>"}


class _Fail(Exception):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise _Fail(f"unexpected character {text[pos]!r}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        out.append((kind, m.group()))
    out.append(("eof", ""))
    return out


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> tuple[str, str]:
        return self.toks[self.i]

    def next(self) -> tuple[str, str]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, text = self.next()
        if text != value or kind == "str":
            raise _Fail(f"expected {value!r}, got {text!r}")

    def at(self, value: str) -> bool:
        kind, text = self.peek()
        return kind in ("op", "kw") and text == value

    def expression(self, min_bp: int = 0) -> Expr:
        left = self.prefix()
        while True:
            kind, op = self.peek()
            if kind != "op" or op not in _INFIX:
                break
            bp = _INFIX[op]
            if bp < min_bp:
                break
            if op in RELATIONAL:
                left = self.comparison(left)
                continue
            self.next()
            right = self.expression(bp if op in _RIGHT_ASSOC else bp + 1)
            left = Binary(op, left, right)
        return left

    def comparison(self, first: Expr) -> Expr:
        ops: list[str] = []
        operands = [first]
        while True:
            kind, op = self.peek()
            if kind != "op" or op not in RELATIONAL:
                break
            self.next()
            ops.append(op)
            operands.append(self.expression(_INFIX["+"]))
        if len(ops) == 1:
            return Binary(ops[0], operands[0], operands[1])
        return Chain(tuple(ops), tuple(operands))

    def prefix(self) -> Expr:
        kind, text = self.next()
        if kind == "op" and text in ("!", "-"):
            return Unary(text, self.postfix(self.prefix_atom_for_unary()))
        self.i -= 1
        return self.postfix(self.atom())

    def prefix_atom_for_unary(self) -> Expr:
        kind, text = self.peek()
        if kind == "op" and text in ("!", "-"):
            self.next()
            return Unary(text, self.postfix(self.prefix_atom_for_unary()))
        return self.atom()

    def atom(self) -> Expr:
        kind, text = self.next()
        if kind == "num":
            return Num(int(text))
        if kind == "str":
            return Str(text[1:-1])
        if kind == "id":
            return Name(text)
        if kind == "kw":
            word = text[1:]
            if word == "result":
                return Result()
            if word == "old":
                self.expect("(")
                inner = self.expression()
                self.expect(")")
                return Old(inner)
            if word in QUANTIFIERS:
                return self.quantifier(word)
            raise _Fail(f"unknown keyword {text}")
        if kind == "op" and text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        raise _Fail(f"unexpected token {text!r}")

    def quantifier(self, word: str) -> Expr:
        kind, binder = self.next()
        if kind != "id":
            raise _Fail("quantifier needs a binder")
        binder_type = None
        if self.at(":"):
            self.next()
            binder_type = self.type_name()
        guard = None
        if self.at("|"):
            self.next()
            guard = self.expression()
        self.expect("::")
        body = self.expression()
        return Quantifier(word, binder, binder_type, guard, body)

    def type_name(self) -> str:
        kind, text = self.next()
        if kind != "id":
            raise _Fail("expected a type")
        out = text
        if self.at("<"):
            depth = 0
            while True:
                k, t = self.next()
                if k == "eof":
                    raise _Fail("unterminated type arguments")
                out += t if t not in (",",) else ", "
                if t == "<":
                    depth += 1
                elif t == ">":
                    depth -= 1
                    if depth == 0:
                        break
        while self.at("["):
            self.next()
            self.expect("]")
            out += "[]"
        return out

    def postfix(self, expr: Expr) -> Expr:
        while True:
            kind, text = self.peek()
            if kind != "op":
                return expr
            if text == "(":
                self.next()
                args: list[Expr] = []
                if not self.at(")"):
                    args.append(self.expression())
                    while self.at(","):
                        self.next()
                        args.append(self.expression())
                self.expect(")")
                expr = Call(expr, tuple(args))
            elif text == "[":
                self.next()
                idx = self.expression()
                self.expect("]")
                expr = Index(expr, idx)
            elif text == ".":
                self.next()
                k, name = self.next()
                if k != "id":
                    raise _Fail("expected a field name")
                expr = Field(expr, name)
            else:
                return expr


def parse_clause_expression(raw: str) -> Optional[Expr]:
    try:
        p = _Parser(_tokenize(raw))
        expr = p.expression()
        if p.peek()[0] != "eof":
            return None
        return expr
    except (_Fail, RecursionError):
        return None


_BACKSLASH_FORM = re.compile(r"\\[A-Za-z_]+")


def classify(raw: str) -> tuple[Formality, Optional[Expr]]:
    """Formal iff the whole text parses; mixed if a ``\\form`` shows up in unparseable text."""
    expr = parse_clause_expression(raw)
    if expr is not None:
        return Formality.FORMAL, expr
    if _BACKSLASH_FORM.search(raw):
        return Formality.MIXED, None
    return Formality.INFORMAL, None


def walk(expr: Expr):
    """Yield every node of an expression tree, parents first."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (Old,)):
            stack.append(node.expr)
        elif isinstance(node, Call):
            stack.extend(reversed(node.args))
            stack.append(node.func)
        elif isinstance(node, Index):
            stack.extend([node.index, node.target])
        elif isinstance(node, Field):
            stack.append(node.target)
        elif isinstance(node, Unary):
            stack.append(node.operand)
        elif isinstance(node, Binary):
            stack.extend([node.right, node.left])
        elif isinstance(node, Chain):
            stack.extend(reversed(node.operands))
        elif isinstance(node, Quantifier):
            stack.append(node.body)
            if node.guard is not None:
                stack.append(node.guard)
