"""LTL formulas in negation normal form, with a parser, printer and size."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

UNARY_TOKENS = ("X", "wX", "F", "G", "Y", "wY", "O", "H")
FUTURE_OPS = frozenset({"X", "wX", "F", "G", "U"})
PAST_OPS = frozenset({"Y", "wY", "O", "H"})
RESERVED = frozenset(UNARY_TOKENS) | {"U"}

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)


@dataclass(frozen=True)
class Lit(Formula):
    prop: str
    positive: bool = True

    def negate(self) -> "Lit":
        return Lit(self.prop, not self.positive)


@dataclass(frozen=True)
class Unary(Formula):
    child: Formula
    token = ""

    def __hash__(self) -> int:
        return hash((self.token, self.child))


class X(Unary):
    token = "X"


class WX(Unary):
    token = "wX"


class F(Unary):
    token = "F"


class G(Unary):
    token = "G"


class Y(Unary):
    token = "Y"


class WY(Unary):
    token = "wY"


class O(Unary):
    token = "O"


class H(Unary):
    token = "H"


@dataclass(frozen=True)
class Binary(Formula):
    left: Formula
    right: Formula
    token = ""

    def __hash__(self) -> int:
        return hash((self.token, self.left, self.right))


class And(Binary):
    token = "&"


class Or(Binary):
    token = "|"


class U(Binary):
    token = "U"


UNARY_CLASSES: dict[str, type[Unary]] = {
    cls.token: cls for cls in (X, WX, F, G, Y, WY, O, H)
}


def op_name(f: Formula) -> str | None:
    """Temporal operator token of the root, or None for literals and Boolean nodes."""
    if isinstance(f, Unary) or isinstance(f, U):
        return f.token
    return None


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Unary):
        return (f.child,)
    if isinstance(f, Binary):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """All nodes in post-order (children before parents), duplicates included."""
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            yield node
            continue
        stack.append((node, True))
        for c in reversed(children(node)):
            stack.append((c, False))


def size(f: Formula) -> int:
    # iterative: instance-lab formulas get deep
    return sum(1 for _ in subformulas(f))


def props(f: Formula) -> frozenset[str]:
    return frozenset(n.prop for n in subformulas(f) if isinstance(n, Lit))


def operators(f: Formula) -> frozenset[str]:
    return frozenset(t for t in map(op_name, subformulas(f)) if t is not None)


def is_pure_future(f: Formula) -> bool:
    return not (operators(f) & PAST_OPS)


def is_pure_past(f: Formula) -> bool:
    return operators(f) <= PAST_OPS


def big_and(parts: Iterable[Formula]) -> Formula:
    """Right-leaning conjunction."""
    items = list(parts)
    if not items:
        raise ValueError("empty conjunction")
    out = items[-1]
    for p in reversed(items[:-1]):
        out = And(p, out)
    return out


def big_or(parts: Iterable[Formula]) -> Formula:
    """Right-leaning disjunction."""
    items = list(parts)
    if not items:
        raise ValueError("empty disjunction")
    out = items[-1]
    for p in reversed(items[:-1]):
        out = Or(p, out)
    return out


@dataclass(frozen=True)
class Fragment:
    """A set of allowed temporal operators.

    With ``eventually_past`` set, the fragment holds formulas ``F a`` where
    ``a`` only uses the operators in ``ops`` (used for F over pure past).
    """

    name: str
    ops: frozenset[str]
    eventually_past: bool = False

    def __contains__(self, f: object) -> bool:
        if not isinstance(f, Formula):
            return False
        if self.eventually_past:
            return isinstance(f, F) and operators(f.child) <= self.ops
        return operators(f) <= self.ops

    def allows(self, token: str) -> bool:
        return token in self.ops and not self.eventually_past


PROP = Fragment("PROP", frozenset())
XF = Fragment("XF", frozenset({"X", "F"}))
XWXFG = Fragment("XWXFG", frozenset({"X", "wX", "F", "G"}))
COSAFETY_U = Fragment("COSAFETY_U", frozenset({"X", "wX", "F", "G", "U"}))
PURE_PAST = Fragment("PURE_PAST", PAST_OPS)
F_PURE_PAST = Fragment("F_PURE_PAST", PAST_OPS, eventually_past=True)

FRAGMENTS = {fr.name: fr for fr in (PROP, XF, XWXFG, COSAFETY_U, PURE_PAST, F_PURE_PAST)}


def fragment_by_name(name: str) -> Fragment:
    key = name.upper().replace("-", "_")
    try:
        return FRAGMENTS[key]
    except KeyError:
        raise ValueError(f"unknown fragment {name!r}; choose from {', '.join(FRAGMENTS)}") from None


# ---------------------------------------------------------------- parsing


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<sym>[()&|!]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        start = m.start("ident") if m.group("ident") else m.start("sym")
        if m.group("ident"):
            out.append(("ident", m.group("ident"), start))
        else:
            out.append(("sym", m.group("sym"), start))
        pos = m.end()
    out.append(("end", "", n))
    return out


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok: tuple[str, str, int]):
        raise FormulaSyntaxError(msg, _byte_offset(self.text, tok[2]))

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value or tok[0] == "ident" and value in "()&|!":
            self.fail(f"expected {value!r}", tok)

    def formula(self) -> Formula:
        left = self.conj()
        while self.peek()[1] == "|" and self.peek()[0] == "sym":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek()[1] == "&" and self.peek()[0] == "sym":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, val, _ = self.peek()
        if kind == "ident" and val in UNARY_CLASSES:
            self.take()
            return UNARY_CLASSES[val](self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.take()
        kind, val, _ = tok
        if kind == "sym" and val == "(":
            inner = self.formula()
            nxt = self.peek()
            if nxt[0] == "ident" and nxt[1] == "U":
                self.take()
                right = self.formula()
                self.expect(")")
                return U(inner, right)
            self.expect(")")
            return inner
        if kind == "sym" and val == "!":
            name = self.take()
            if name[0] != "ident" or name[1] in RESERVED:
                self.fail("expected proposition after '!'", name)
            return Lit(name[1], False)
        if kind == "ident":
            if val in RESERVED:
                self.fail(f"operator {val!r} used as proposition", tok)
            return Lit(val, True)
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected token {val!r}", tok)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    tok = p.peek()
    if tok[0] != "end":
        p.fail(f"unexpected token {tok[1]!r}", tok)
    return f


def is_proposition_name(name: str) -> bool:
    return bool(_IDENT.fullmatch(name)) and name not in RESERVED


# ---------------------------------------------------------------- printing

_DISJ, _CONJ, _UNARY = 0, 1, 2


def to_text(f: Formula) -> str:
    return _show(f, _DISJ)


def _show(f: Formula, level: int) -> str:
    if isinstance(f, Lit):
        return f.prop if f.positive else "!" + f.prop
    if isinstance(f, Unary):
        return f"{f.token} {_show(f.child, _UNARY)}"
    if isinstance(f, U):
        return f"({_show(f.left, _DISJ)} U {_show(f.right, _DISJ)})"
    if isinstance(f, Or):
        text = f"{_show(f.left, _DISJ)} | {_show(f.right, _CONJ)}"
        return text if level <= _DISJ else f"({text})"
    if isinstance(f, And):
        text = f"{_show(f.left, _CONJ)} & {_show(f.right, _UNARY)}"
        return text if level <= _CONJ else f"({text})"
    raise TypeError(f"not a formula: {f!r}")
