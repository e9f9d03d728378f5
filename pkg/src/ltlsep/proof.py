"""The combinatorial proof system: rule checking, tree verification and the
translations between deduction trees and separating formulas."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .formula import (
    And, F, Formula, Fragment, G, Lit, Or, U, WX, X, size as formula_size,
)
from .semantics import evaluate, holds, separates
from .traces import (
    FuturePoint, Trace, TraceSet, apply_future_point, suffix_g, suffix_x,
)


@dataclass(frozen=True)
class SepInstance:
    """The proof obligation ⟨A, B⟩: find a formula true on A and false on B."""

    a: TraceSet
    b: TraceSet

    def __init__(self, a: Iterable[Trace], b: Iterable[Trace]):
        object.__setattr__(self, "a", a if isinstance(a, TraceSet) else TraceSet(a))
        object.__setattr__(self, "b", b if isinstance(b, TraceSet) else TraceSet(b))

    def props(self) -> frozenset[str]:
        return self.a.props() | self.b.props()

    def overlapping(self) -> bool:
        return not self.a.isdisjoint(self.b)

    def __repr__(self) -> str:
        return f"⟨{self.a!r}, {self.b!r}⟩"


# ---------------------------------------------------------------- rules


@dataclass(frozen=True)
class Atomic:
    literal: Lit
    tag = "atomic"
    operator = None


@dataclass(frozen=True)
class OrSplit:
    a1: TraceSet
    a2: TraceSet
    tag = "or"
    operator = None


@dataclass(frozen=True)
class AndSplit:
    b1: TraceSet
    b2: TraceSet
    tag = "and"
    operator = None


@dataclass(frozen=True)
class Next:
    tag = "next"
    operator = "X"


@dataclass(frozen=True)
class WeakNext:
    tag = "weak_next"
    operator = "wX"


@dataclass(frozen=True, eq=False)
class Future:
    point: Mapping[Trace, int]
    tag = "future"
    operator = "F"

    def __eq__(self, other):
        return isinstance(other, Future) and dict(self.point) == dict(other.point)


@dataclass(frozen=True, eq=False)
class Globally:
    point: Mapping[Trace, int]
    tag = "globally"
    operator = "G"

    def __eq__(self, other):
        return isinstance(other, Globally) and dict(self.point) == dict(other.point)


@dataclass(frozen=True, eq=False)
class Until:
    f: Mapping[Trace, int]
    g: Mapping[Trace, int]
    tag = "until"
    operator = "U"

    def __eq__(self, other):
        return isinstance(other, Until) and dict(self.f) == dict(other.f) and dict(self.g) == dict(other.g)


RuleApp = Atomic | OrSplit | AndSplit | Next | WeakNext | Future | Globally | Until


class RuleError(ValueError):
    """A side condition of a rule does not hold."""


def literal_holds(t: Trace, lit: Lit) -> bool:
    return (lit.prop in t[0]) == lit.positive


def atomic_literals(inst: SepInstance, ap: Iterable[str] | None = None) -> list[Lit]:
    """All literals ``α`` with ``A ⊨ α`` and ``B ⊥ α``, positive before negative, by name."""
    names = sorted(inst.props() if ap is None else ap)
    out = []
    for positive in (True, False):
        for p in names:
            lit = Lit(p, positive)
            if all(literal_holds(t, lit) for t in inst.a) and not any(
                literal_holds(t, lit) for t in inst.b
            ):
                out.append(lit)
    return out


def forall_before(a: Iterable[Trace], f: FuturePoint) -> TraceSet:
    """``(f,A)^∀``: every suffix strictly before the chosen point."""
    _check_point(a, f)
    return TraceSet(t.suffix(j) for t in a for j in range(f[t]))


def g_strict(b: Iterable[Trace], g: FuturePoint) -> TraceSet:
    """``g_<(B)``: the chosen suffix, kept only when it is not the last position."""
    _check_point(b, g)
    return TraceSet(t.suffix(g[t]) for t in b if g[t] < len(t) - 1)


def weak_forall_upto(b: Iterable[Trace], g: FuturePoint) -> TraceSet:
    """``(g,B)^{w∀}``: every suffix up to and including the chosen point."""
    _check_point(b, g)
    return TraceSet(t.suffix(j) for t in b for j in range(g[t] + 1))


def _check_point(ts: Iterable[Trace], f: FuturePoint) -> None:
    for t in ts:
        if t not in f:
            raise RuleError(f"future point undefined on {t}")
        if not 0 <= f[t] < len(t):
            raise RuleError(f"future point {f[t]} out of range for {t}")


def until_child_sets(
    a: Iterable[Trace], b: Iterable[Trace], f: FuturePoint, g: FuturePoint
) -> tuple[SepInstance, SepInstance]:
    return (
        SepInstance(forall_before(a, f), g_strict(b, g)),
        SepInstance(apply_future_point(a, f), weak_forall_upto(b, g)),
    )


def check_rule(
    inst: SepInstance, rule: RuleApp, fragment: Fragment | None = None
) -> tuple[SepInstance, ...]:
    """Children of ``rule`` applied at ``inst``; raises RuleError on a violated side condition."""
    if fragment is not None and rule.operator is not None and not fragment.allows(rule.operator):
        raise RuleError(f"operator {rule.operator} not allowed in fragment {fragment.name}")
    a, b = inst.a, inst.b
    if isinstance(rule, Atomic):
        lit = rule.literal
        if not all(literal_holds(t, lit) for t in a):
            raise RuleError(f"A does not satisfy {lit}")
        if any(literal_holds(t, lit) for t in b):
            raise RuleError(f"B does not violate {lit}")
        return ()
    if isinstance(rule, OrSplit):
        if not rule.a1.isdisjoint(rule.a2) or rule.a1 | rule.a2 != a:
            raise RuleError("A1, A2 do not partition A")
        return (SepInstance(rule.a1, b), SepInstance(rule.a2, b))
    if isinstance(rule, AndSplit):
        if not rule.b1.isdisjoint(rule.b2) or rule.b1 | rule.b2 != b:
            raise RuleError("B1, B2 do not partition B")
        return (SepInstance(a, rule.b1), SepInstance(a, rule.b2))
    if isinstance(rule, Next):
        if any(len(t) < 2 for t in a):
            raise RuleError("some trace in A has no next position")
        return (SepInstance(suffix_x(a), suffix_x(b)),)
    if isinstance(rule, WeakNext):
        if any(len(t) < 2 for t in b):
            raise RuleError("some trace in B has no next position")
        return (SepInstance(suffix_x(a), suffix_x(b)),)
    if isinstance(rule, Future):
        _check_point(a, rule.point)
        return (SepInstance(apply_future_point(a, rule.point), suffix_g(b)),)
    if isinstance(rule, Globally):
        _check_point(b, rule.point)
        return (SepInstance(suffix_g(a), apply_future_point(b, rule.point)),)
    if isinstance(rule, Until):
        return until_child_sets(a, b, rule.f, rule.g)
    raise TypeError(f"unknown rule {rule!r}")


# ---------------------------------------------------------------- trees


@dataclass(frozen=True)
class DeductionTree:
    instance: SepInstance
    rule: RuleApp
    children: tuple["DeductionTree", ...] = field(default=())

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    def rules(self):
        yield self.rule
        for c in self.children:
            yield from c.rules()


@dataclass(frozen=True)
class Verification:
    ok: bool
    path: tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        where = "/".join(map(str, self.path)) or "root"
        return f"invalid at {where}: {self.reason}"


def verify_tree(t: DeductionTree, fragment: Fragment | None = None) -> Verification:
    stack: list[tuple[DeductionTree, tuple[int, ...]]] = [(t, ())]
    while stack:
        node, path = stack.pop()
        try:
            expected = check_rule(node.instance, node.rule, fragment)
        except RuleError as e:
            return Verification(False, path, str(e))
        if len(expected) != len(node.children):
            return Verification(False, path, f"expected {len(expected)} children, got {len(node.children)}")
        for i, (want, child) in enumerate(zip(expected, node.children)):
            if child.instance != want:
                return Verification(False, path + (i,), f"child instance {child.instance!r} should be {want!r}")
            stack.append((child, path + (i,)))
    return Verification(True)


def formula_from_tree(t: DeductionTree) -> Formula:
    r = t.rule
    if isinstance(r, Atomic):
        return r.literal
    kids = [formula_from_tree(c) for c in t.children]
    if isinstance(r, OrSplit):
        return Or(kids[0], kids[1])
    if isinstance(r, AndSplit):
        return And(kids[0], kids[1])
    if isinstance(r, Next):
        return X(kids[0])
    if isinstance(r, WeakNext):
        return WX(kids[0])
    if isinstance(r, Future):
        return F(kids[0])
    if isinstance(r, Globally):
        return G(kids[0])
    if isinstance(r, Until):
        return U(kids[0], kids[1])
    raise TypeError(f"unknown rule {r!r}")


class NotSeparating(ValueError):
    pass


def tree_from_formula(a: Iterable[Trace], b: Iterable[Trace], f: Formula) -> DeductionTree:
    """Deduction tree of size ``size(f)`` for a separating formula ``f``.

    Splits follow the formula: the first part of an Or split holds the A
    traces satisfying the left disjunct, the first part of an And split holds
    the B traces violating the left conjunct. F and U pick the least witness
    position, G the least position where the body fails.
    """
    inst = SepInstance(a, b)
    if not separates(f, inst.a, inst.b):
        raise NotSeparating(f"{f} does not separate {inst!r}")
    return _build(inst, f)


def _first(values: Sequence[bool], want: bool) -> int:
    return next(i for i, v in enumerate(values) if v == want)


def _build(inst: SepInstance, f: Formula) -> DeductionTree:
    a, b = inst.a, inst.b
    if isinstance(f, Lit):
        return DeductionTree(inst, Atomic(f))
    if isinstance(f, Or):
        a1 = TraceSet(t for t in a if holds(t, f.left))
        rule = OrSplit(a1, TraceSet(a - a1))
    elif isinstance(f, And):
        b1 = TraceSet(t for t in b if not holds(t, f.left))
        rule = AndSplit(b1, TraceSet(b - b1))
    elif isinstance(f, X):
        rule = Next()
    elif isinstance(f, WX):
        rule = WeakNext()
    elif isinstance(f, F):
        rule = Future({t: _first(evaluate(t, f.child), True) for t in a})
    elif isinstance(f, G):
        rule = Globally({t: _first(evaluate(t, f.child), False) for t in b})
    elif isinstance(f, U):
        fp = {}
        for t in a:
            l, r = evaluate(t, f.left), evaluate(t, f.right)
            fp[t] = next(j for j in range(len(t)) if r[j] and all(l[:j]))
        gp = {}
        for t in b:
            l, r = evaluate(t, f.left), evaluate(t, f.right)
            if not any(r):
                gp[t] = len(t) - 1
            else:
                gp[t] = next(j for j in range(len(t) - 1) if not l[j] and not any(r[: j + 1]))
        rule = Until(fp, gp)
    else:
        raise ValueError(f"no rule for operator of {f}")
    kids = check_rule(inst, rule)
    parts = (f.child,) if len(kids) == 1 else (f.left, f.right)
    return DeductionTree(inst, rule, tuple(_build(k, p) for k, p in zip(kids, parts)))


# ---------------------------------------------------------------- JSON


def _point_out(ts: TraceSet, point: Mapping[Trace, int]) -> list[int]:
    return [point[t] for t in ts.ordered()]


def _point_in(ts: TraceSet, values: Sequence[int]) -> dict[Trace, int]:
    members = ts.ordered()
    if len(values) != len(members):
        raise ValueError("future point length does not match the trace set")
    return dict(zip(members, values))


def _split_out(whole: TraceSet, part: TraceSet) -> list[list[int]]:
    members = whole.ordered()
    first = [i for i, t in enumerate(members) if t in part]
    second = [i for i, t in enumerate(members) if t not in part]
    return [first, second]


def tree_to_dict(t: DeductionTree) -> dict[str, Any]:
    r = t.rule
    a, b = t.instance.a, t.instance.b
    if isinstance(r, Atomic):
        arg: Any = str(r.literal)
    elif isinstance(r, OrSplit):
        arg = _split_out(a, r.a1)
    elif isinstance(r, AndSplit):
        arg = _split_out(b, r.b1)
    elif isinstance(r, Future):
        arg = _point_out(a, r.point)
    elif isinstance(r, Globally):
        arg = _point_out(b, r.point)
    elif isinstance(r, Until):
        arg = {"f": _point_out(a, r.f), "g": _point_out(b, r.g)}
    else:
        arg = None
    return {
        "a": [str(x) for x in a.ordered()],
        "b": [str(x) for x in b.ordered()],
        "rule": r.tag,
        "arg": arg,
        "children": [tree_to_dict(c) for c in t.children],
    }


def tree_from_dict(d: Mapping[str, Any]) -> DeductionTree:
    from .formula import parse_formula

    inst = SepInstance((Trace.parse(s) for s in d["a"]), (Trace.parse(s) for s in d["b"]))
    a, b = inst.a, inst.b
    tag, arg = d["rule"], d.get("arg")
    if tag == "atomic":
        lit = parse_formula(arg)
        if not isinstance(lit, Lit):
            raise ValueError(f"atomic rule needs a literal, got {arg!r}")
        rule: RuleApp = Atomic(lit)
    elif tag in ("or", "and"):
        whole = a if tag == "or" else b
        members = whole.ordered()
        p1 = TraceSet(members[i] for i in arg[0])
        p2 = TraceSet(members[i] for i in arg[1])
        rule = OrSplit(p1, p2) if tag == "or" else AndSplit(p1, p2)
    elif tag == "next":
        rule = Next()
    elif tag == "weak_next":
        rule = WeakNext()
    elif tag == "future":
        rule = Future(_point_in(a, arg))
    elif tag == "globally":
        rule = Globally(_point_in(b, arg))
    elif tag == "until":
        rule = Until(_point_in(a, arg["f"]), _point_in(b, arg["g"]))
    else:
        raise ValueError(f"unknown rule tag {tag!r}")
    return DeductionTree(inst, rule, tuple(tree_from_dict(c) for c in d.get("children", ())))


def dump_tree(t: DeductionTree) -> str:
    return json.dumps(tree_to_dict(t), indent=2)


def load_tree(text: str) -> DeductionTree:
    return tree_from_dict(json.loads(text))


def tree_formula_size(t: DeductionTree) -> int:
    return formula_size(formula_from_tree(t))
