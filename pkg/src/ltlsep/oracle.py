"""Brute-force minimal separator by enumerating formulas in order of size.

Independent of the proof system: formulas are evaluated directly. Each
formula is summarised by its truth vector over every position of every
trace, packed into an int. Two formulas with the same vector behave the same
in every context over these traces, so by default only the first (smallest)
formula per vector is kept.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .formula import (
    And, Formula, Fragment, Lit, Or, U, UNARY_CLASSES,
)
from .traces import Trace, TraceSet


class OracleUnseparable(Exception):
    pass


@dataclass(frozen=True)
class OracleResult:
    size: int
    formula: Formula


class _Positions:
    def __init__(self, traces: list[Trace]):
        self.traces = traces
        self.start: dict[Trace, int] = {}
        pos = 0
        first = last = 0
        for t in traces:
            self.start[t] = pos
            first |= 1 << pos
            last |= 1 << (pos + len(t) - 1)
            pos += len(t)
        self.n = pos
        self.full = (1 << pos) - 1
        self.first = first
        self.last = last
        self.notlast = self.full & ~last
        self.notfirst = self.full & ~first
        self.rounds = max((len(t) for t in traces), default=1)

    def literal(self, lit: Lit) -> int:
        v = 0
        for t in self.traces:
            s = self.start[t]
            for i, a in enumerate(t):
                if (lit.prop in a) == lit.positive:
                    v |= 1 << (s + i)
        return v

    def step(self, v: int) -> int:
        """Value at the next position (false at the last one)."""
        return (v >> 1) & self.notlast

    def back(self, v: int) -> int:
        """Value at the previous position (false at the first one)."""
        return (v << 1) & self.notfirst

    def unary(self, token: str, v: int) -> int:
        if token == "X":
            return self.step(v)
        if token == "wX":
            return self.step(v) | self.last
        if token == "Y":
            return self.back(v)
        if token == "wY":
            return self.back(v) | self.first
        r = v
        for _ in range(self.rounds):
            if token == "F":
                r = v | self.step(r)
            elif token == "G":
                r = v & (self.step(r) | self.last)
            elif token == "O":
                r = v | self.back(r)
            elif token == "H":
                r = v & (self.back(r) | self.first)
            else:
                raise ValueError(token)
        return r

    def until(self, l: int, r: int) -> int:
        x = r
        for _ in range(self.rounds):
            x = r | (l & self.step(x))
        return x


def brute_force_min_formula(
    a: Iterable[Trace],
    b: Iterable[Trace],
    fragment: Fragment,
    max_size: int = 8,
    ap: Iterable[str] | None = None,
    dedupe: bool = True,
    decide: bool = True,
) -> OracleResult | None:
    """Smallest formula of ``fragment`` true on all of A at position 0 and false on all of B.

    Returns None when there is none up to ``max_size``. With ``decide``, a
    miss is followed by an exact separability check and OracleUnseparable is
    raised when no separator of any size exists.
    """
    a, b = TraceSet(a), TraceSet(b)
    names = sorted((a.props() | b.props()) if ap is None else ap)
    traces = sorted(a | b, key=Trace.sort_key)
    pos = _Positions(traces)
    a_mask = sum(1 << pos.start[t] for t in a)
    b_mask = sum(1 << pos.start[t] for t in b)

    inner_ops = fragment.ops
    unary = [t for t in UNARY_CLASSES if t in inner_ops]
    with_until = "U" in inner_ops

    def good(v: int) -> bool:
        return v & a_mask == a_mask and not v & b_mask

    def outer(v: int, f: Formula, s: int) -> OracleResult | None:
        # for F over past, the separator is F applied to an inner formula
        if fragment.eventually_past:
            w = pos.unary("F", v)
            return OracleResult(s + 1, UNARY_CLASSES["F"](f)) if good(w) and s + 1 <= max_size else None
        return OracleResult(s, f) if good(v) else None

    levels: list[list[tuple[int, Formula]]] = [[]]
    seen: set[int] = set()
    limit = max_size - 1 if fragment.eventually_past else max_size
    for size in range(1, limit + 1):
        fresh: list[tuple[int, Formula]] = []

        def add(v: int, f: Formula):
            if dedupe:
                if v in seen:
                    return
                seen.add(v)
            fresh.append((v, f))

        if size == 1:
            for p in names:
                for positive in (True, False):
                    lit = Lit(p, positive)
                    add(pos.literal(lit), lit)
        else:
            for tok in unary:
                cls = UNARY_CLASSES[tok]
                for v, f in levels[size - 1]:
                    add(pos.unary(tok, v), cls(f))
            for i in range(1, size - 1):
                j = size - 1 - i
                for li, (v1, f1) in enumerate(levels[i]):
                    for rj, (v2, f2) in enumerate(levels[j]):
                        if i < j or (i == j and li <= rj):
                            add(v1 & v2, And(f1, f2))
                            add(v1 | v2, Or(f1, f2))
                        if with_until:
                            add(pos.until(v1, v2), U(f1, f2))
        levels.append(fresh)
        for v, f in fresh:
            hit = outer(v, f, size)
            if hit is not None:
                return hit
    if decide and not fragment.eventually_past and not separable(a, b, fragment, names):
        raise OracleUnseparable("some pair of traces cannot be told apart")
    return None


def separable(a: Iterable[Trace], b: Iterable[Trace], fragment: Fragment, ap: Iterable[str]) -> bool:
    """Whether any formula of the fragment separates, ignoring size.

    With conjunction and disjunction at hand, A and B are separable iff every
    pair (a, b) is: take the disjunction over a of the conjunction over b of
    the pairwise separators. Each pair is decided by closing the literal
    vectors over the two traces under all operators.
    """
    names = sorted(ap)
    bs = list(b)
    return all(_pair_separable(x, y, fragment, names) for x in a for y in bs)


def _pair_separable(x: Trace, y: Trace, fragment: Fragment, names: list[str]) -> bool:
    if x == y:
        return False
    pos = _Positions([x, y])
    want, avoid = 1 << pos.start[x], 1 << pos.start[y]
    unary = [t for t in UNARY_CLASSES if t in fragment.ops]
    with_until = "U" in fragment.ops
    vals: set[int] = set()
    work: list[int] = []

    def add(v: int) -> bool:
        if v in vals:
            return False
        vals.add(v)
        work.append(v)
        return bool(v & want) and not v & avoid

    for p in names:
        for positive in (True, False):
            if add(pos.literal(Lit(p, positive))):
                return True
    while work:
        v = work.pop()
        for tok in unary:
            if add(pos.unary(tok, v)):
                return True
        for w in list(vals):
            if add(v & w) or add(v | w):
                return True
            if with_until and (add(pos.until(v, w)) or add(pos.until(w, v))):
                return True
    return False
