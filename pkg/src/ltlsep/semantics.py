"""Satisfaction over finite traces and ultimately periodic (lasso) words."""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .formula import (
    And, Binary, F, Formula, G, H, Lit, O, Or, U, Unary, WX, WY, X, Y,
    is_pure_future, subformulas,
)
from .traces import Letter, Trace


def _unary_vec(node: Unary, v: list[bool]) -> list[bool]:
    n = len(v)
    if isinstance(node, X):
        return v[1:] + [False]
    if isinstance(node, WX):
        return v[1:] + [True]
    if isinstance(node, Y):
        return [False] + v[:-1]
    if isinstance(node, WY):
        return [True] + v[:-1]
    out = [False] * n
    if isinstance(node, F):
        acc = False
        for i in range(n - 1, -1, -1):
            acc = acc or v[i]
            out[i] = acc
    elif isinstance(node, G):
        acc = True
        for i in range(n - 1, -1, -1):
            acc = acc and v[i]
            out[i] = acc
    elif isinstance(node, O):
        acc = False
        for i in range(n):
            acc = acc or v[i]
            out[i] = acc
    elif isinstance(node, H):
        acc = True
        for i in range(n):
            acc = acc and v[i]
            out[i] = acc
    else:
        raise TypeError(node)
    return out


def _binary_vec(node: Binary, l: list[bool], r: list[bool]) -> list[bool]:
    if isinstance(node, And):
        return [x and y for x, y in zip(l, r)]
    if isinstance(node, Or):
        return [x or y for x, y in zip(l, r)]
    if isinstance(node, U):
        out = [False] * len(l)
        acc = False
        for i in range(len(l) - 1, -1, -1):
            acc = r[i] or (l[i] and acc)
            out[i] = acc
        return out
    raise TypeError(node)


def evaluate(trace: Trace, f: Formula) -> list[bool]:
    """Truth value of ``f`` at every position of ``trace``."""
    if trace.offset and is_pure_future(f):
        # future formulas only look right, so reuse the full trace's table
        return list(_full_vector(trace.root(), f)[trace.offset:])
    return list(_full_vector(trace, f))


@lru_cache(maxsize=4096)
def _full_vector(trace: Trace, f: Formula) -> tuple[bool, ...]:
    letters = trace.letters
    memo: dict[int, list[bool]] = {}
    for node in subformulas(f):
        if id(node) in memo:
            continue
        if isinstance(node, Lit):
            v = [(node.prop in a) == node.positive for a in letters]
        elif isinstance(node, Unary):
            v = _unary_vec(node, memo[id(node.child)])
        else:
            v = _binary_vec(node, memo[id(node.left)], memo[id(node.right)])
        memo[id(node)] = v
    return tuple(memo[id(f)])


def holds(trace: Trace, f: Formula, i: int = 0) -> bool:
    """``σ, i ⊨ f``."""
    if not 0 <= i < len(trace):
        raise IndexError(f"position {i} out of range for length {len(trace)}")
    return evaluate(trace, f)[i]


def satisfies_all(ts: Iterable[Trace], f: Formula) -> bool:
    return all(holds(t, f) for t in ts)


def violates_all(ts: Iterable[Trace], f: Formula) -> bool:
    return not any(holds(t, f) for t in ts)


def separates(f: Formula, a: Iterable[Trace], b: Iterable[Trace]) -> bool:
    return satisfies_all(a, f) and violates_all(b, f)


# ---------------------------------------------------------------- lasso words


def eval_lasso(u: Sequence[Letter], v: Sequence[Letter], f: Formula) -> bool:
    """Satisfaction of ``u·v^ω`` at position 0 for a pure-future formula.

    Positions ``0..|u|+|v|-1`` form a lasso graph whose last position loops
    back to ``|u|``. F and U are least fixpoints over it, G a greatest one.
    """
    if not v:
        raise ValueError("lasso period must be nonempty")
    if not is_pure_future(f):
        raise ValueError("eval_lasso only handles pure-future formulas")
    word = list(u) + list(v)
    n = len(word)
    succ = list(range(1, n)) + [len(u)]
    memo: dict[int, list[bool]] = {}
    for node in subformulas(f):
        if id(node) in memo:
            continue
        if isinstance(node, Lit):
            val = [(node.prop in a) == node.positive for a in word]
        elif isinstance(node, (X, WX)):
            c = memo[id(node.child)]
            val = [c[succ[i]] for i in range(n)]
        elif isinstance(node, F):
            c = memo[id(node.child)]
            val = _fixpoint(n, succ, lambda i, cur: c[i] or cur[succ[i]], False)
        elif isinstance(node, G):
            c = memo[id(node.child)]
            val = _fixpoint(n, succ, lambda i, cur: c[i] and cur[succ[i]], True)
        elif isinstance(node, U):
            l, r = memo[id(node.left)], memo[id(node.right)]
            val = _fixpoint(n, succ, lambda i, cur: r[i] or (l[i] and cur[succ[i]]), False)
        elif isinstance(node, And):
            val = [x and y for x, y in zip(memo[id(node.left)], memo[id(node.right)])]
        elif isinstance(node, Or):
            val = [x or y for x, y in zip(memo[id(node.left)], memo[id(node.right)])]
        else:
            raise TypeError(node)
        memo[id(node)] = val
    return memo[id(f)][0]


def _fixpoint(n, succ, step, start: bool) -> list[bool]:
    cur = [start] * n
    while True:
        nxt = [step(i, cur) for i in range(n)]
        if nxt == cur:
            return cur
        cur = nxt
