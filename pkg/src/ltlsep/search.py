"""Exact minimal deduction-tree search.

Iterative deepening on tree size over a memo table keyed by instance. Each
memo entry holds a proven lower bound and, once known, the exact minimum
together with the rule application that achieves it.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .formula import (
    And, Formula, Fragment, Lit, WX, X, XWXFG, big_and, big_or, size as formula_size,
)
from .proof import (
    AndSplit, Atomic, DeductionTree, Future, Globally, Next, OrSplit, RuleApp,
    SepInstance, Until, WeakNext, atomic_literals, formula_from_tree,
)
from .measures import projected_delta1_bound
from .traces import Letter, Trace, TraceSet, suffix_g, suffix_x

INF = math.inf


class SearchError(Exception):
    pass


class Unseparable(SearchError):
    """No formula of the fragment separates the instance."""


class BudgetExceeded(SearchError):
    """No deduction tree within the size budget; separability undecided."""


@dataclass
class SearchConfig:
    fragment: Fragment = XWXFG
    budget: int = 12
    mode: str = "sequential"
    prune: bool = True
    workers: int | None = None
    ap: frozenset[str] | None = None
    # optional extra lower bound (instance -> int); only used when the
    # fragment's operators are within ``measure_ops``
    measure: Callable[[SepInstance], int] | None = None
    measure_ops: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.mode not in ("sequential", "parallel"):
            raise ValueError(f"unknown search mode {self.mode!r}")


@dataclass
class SearchResult:
    size: int
    tree: DeductionTree
    stats: dict = field(default_factory=dict)

    @property
    def formula(self) -> Formula:
        return formula_from_tree(self.tree)


# ---------------------------------------------------------------- separability


def letter_formula(a: Letter, ap: Iterable[str]) -> Formula:
    return big_and(Lit(p, p in a) for p in sorted(ap))


def _chain(t: Trace, ap, end_marker: bool) -> Formula:
    out = letter_formula(t[-1], ap)
    if end_marker:
        p = min(ap)
        out = And(out, WX(And(Lit(p), Lit(p, False))))
    for a in reversed(t.letters[:-1]):
        out = And(letter_formula(a, ap), X(out))
    return out


def separability(inst: SepInstance, fragment: Fragment, ap: Iterable[str] | None = None) -> bool | None:
    """Decide separability where a simple criterion is known, else None.

    * any fragment: overlapping sets are never separable
    * no temporal operators: only first letters matter
    * X and wX available: disjointness suffices
    * X, possibly F, but no wX: formulas are closed under extension, so
      separable iff no trace in A is a prefix of a trace in B
    """
    ap = inst.props() if ap is None else frozenset(ap)
    if inst.overlapping():
        return False
    if not ap:
        return False
    ops = fragment.ops
    if fragment.eventually_past:
        return None
    if not ops:
        return {t[0] for t in inst.a}.isdisjoint({t[0] for t in inst.b})
    if {"X", "wX"} <= ops:
        return True
    if "X" in ops and ops <= {"X", "F"}:
        return not any(x.is_prefix_of(y) for x in inst.a for y in inst.b)
    return None


def characteristic_separator(
    inst: SepInstance, fragment: Fragment, ap: Iterable[str] | None = None
) -> Formula | None:
    """An explicit (usually far from minimal) separator when ``separability`` says yes."""
    ap = sorted(inst.props() if ap is None else ap)
    if separability(inst, fragment, ap) is not True or not ap or not inst.a:
        return None
    ops = fragment.ops
    if not ops:
        firsts = sorted({t[0] for t in inst.a}, key=lambda a: tuple(sorted(a)))
        return big_or(letter_formula(a, ap) for a in firsts)
    end_marker = "wX" in ops
    return big_or(_chain(t, ap, end_marker) for t in inst.a.ordered())


def sufficient_budget(inst: SepInstance, fragment: Fragment, ap: Iterable[str] | None = None) -> int | None:
    f = characteristic_separator(inst, fragment, ap)
    return None if f is None else formula_size(f)


# ---------------------------------------------------------------- engine


def _minimal_members(ts: TraceSet) -> list[tuple[Trace, Trace, int]]:
    """For each member, a member that is a suffix of it and has no proper
    suffix in the set, with the offset between them."""
    out = []
    for t in ts.ordered():
        for k in range(len(t) - 1, -1, -1):
            s = t.suffix(k)
            if s in ts and not any(s.suffix(j) in ts for j in range(1, len(s))):
                out.append((t, s, k))
                break
    return out


def _reduced_points(ts: TraceSet) -> Iterator[tuple[dict[Trace, int], TraceSet]]:
    """Future points on ``ts`` up to weakening.

    A member with a proper suffix in the set can jump to the same suffix as
    that member, which only shrinks the image set; so only the members without
    such a suffix choose freely.
    """
    anchors = _minimal_members(ts)
    free = sorted({s for _, s, _ in anchors}, key=Trace.sort_key)
    seen = set()
    for combo in itertools.product(*(range(len(s)) for s in free)):
        chosen = dict(zip(free, combo))
        image = TraceSet(s.suffix(j) for s, j in chosen.items())
        if image in seen:
            continue
        seen.add(image)
        point = {t: k + chosen[s] for t, s, k in anchors}
        yield point, image


def _splits(ts: TraceSet) -> Iterator[tuple[TraceSet, TraceSet]]:
    members = ts.ordered()
    first, rest = members[0], members[1:]
    for mask in range(2 ** len(rest) - 1):
        part1 = [first] + [t for i, t in enumerate(rest) if mask >> i & 1]
        part2 = [t for i, t in enumerate(rest) if not mask >> i & 1]
        yield TraceSet(part1), TraceSet(part2)


def _all_points(ts: TraceSet) -> Iterator[dict[Trace, int]]:
    members = ts.ordered()
    for combo in itertools.product(*(range(len(t)) for t in members)):
        yield dict(zip(members, combo))


class _Entry:
    __slots__ = ("lb", "exact", "choice", "options", "until")

    def __init__(self, lb):
        self.lb = lb
        self.exact = None
        self.choice = None
        self.options = None
        self.until = None


class Engine:
    def __init__(self, fragment: Fragment, ap: frozenset[str], prune: bool = True,
                 measure=None, measure_ops=frozenset()):
        if fragment.eventually_past or fragment.ops & {"Y", "wY", "O", "H"}:
            raise ValueError(f"the proof system has no rules for fragment {fragment.name}")
        self.fragment = fragment
        self.ap = frozenset(ap)
        self.prune = prune
        self.measure = measure if measure is not None and fragment.ops <= measure_ops else None
        self.memo: dict[SepInstance, _Entry] = {}
        self.expanded = 0

    # -- bounds

    def entry(self, inst: SepInstance) -> _Entry:
        e = self.memo.get(inst)
        if e is not None:
            return e
        if separability(inst, self.fragment, self.ap) is False:
            e = _Entry(INF)
        else:
            lits = atomic_literals(inst, self.ap)
            if lits:
                e = _Entry(1)
                e.exact = 1
                e.choice = (Atomic(lits[0]), ())
            else:
                e = _Entry(2)
                if self.prune:
                    e.lb = max(e.lb, self._measure_bound(inst))
        self.memo[inst] = e
        return e

    def _measure_bound(self, inst: SepInstance) -> int:
        if not self.fragment.ops:
            bound = projected_delta1_bound(inst)
        else:
            bound = 0
        if self.measure is not None:
            bound = max(bound, self.measure(inst))
        return bound

    def best(self, inst: SepInstance, bound: int) -> int | None:
        """Exact minimum tree size of ``inst`` if it is at most ``bound``."""
        e = self.entry(inst)
        if e.exact is not None:
            return e.exact if e.exact <= bound else None
        while e.lb <= bound:
            t = e.lb
            if self._find(inst, e, t):
                e.exact = t
                return t
            e.lb = t + 1
        return None

    # -- rule options

    def options(self, inst: SepInstance, e: _Entry) -> list[tuple[RuleApp, tuple[SepInstance, ...]]]:
        if e.options is not None:
            return e.options
        self.expanded += 1
        a, b = inst.a, inst.b
        ops = self.fragment.ops
        out: list[tuple[RuleApp, tuple[SepInstance, ...]]] = []
        if "X" in ops and all(len(t) >= 2 for t in a):
            out.append((Next(), (SepInstance(suffix_x(a), suffix_x(b)),)))
        if "wX" in ops and all(len(t) >= 2 for t in b):
            out.append((WeakNext(), (SepInstance(suffix_x(a), suffix_x(b)),)))
        if "F" in ops:
            bg = suffix_g(b)
            for point, image in _reduced_points(a):
                out.append((Future(point), (SepInstance(image, bg),)))
        if "G" in ops:
            ag = suffix_g(a)
            for point, image in _reduced_points(b):
                out.append((Globally(point), (SepInstance(ag, image),)))
        if len(a) >= 2:
            for a1, a2 in _splits(a):
                out.append((OrSplit(a1, a2), (SepInstance(a1, b), SepInstance(a2, b))))
        if len(b) >= 2:
            for b1, b2 in _splits(b):
                out.append((AndSplit(b1, b2), (SepInstance(a, b1), SepInstance(a, b2))))
        e.options = out
        return out

    def until_options(self, inst: SepInstance, e: _Entry) -> list[tuple[RuleApp, tuple[SepInstance, ...]]]:
        """Until applications whose two children are both disjoint.

        Once f is fixed, the admissible values of g(b) can be found for each
        b on its own, which keeps the product over B small.
        """
        if e.until is not None:
            return e.until
        a, b = inst.a, inst.b
        as_, bs = a.ordered(), b.ordered()
        # per-trace contributions to the four child sets
        a_parts = [
            [(frozenset(t.suffix(i) for i in range(j)), t.suffix(j)) for j in range(len(t))]
            for t in as_
        ]
        b_parts = [
            [(frozenset([t.suffix(j)]) if j < len(t) - 1 else frozenset(),
              frozenset(t.suffix(i) for i in range(j + 1))) for j in range(len(t))]
            for t in bs
        ]
        out = []
        seen = set()
        for f_combo in itertools.product(*(range(len(t)) for t in as_)):
            before = frozenset().union(*(a_parts[k][j][0] for k, j in enumerate(f_combo)))
            image = frozenset(a_parts[k][j][1] for k, j in enumerate(f_combo))
            choices = []
            for k, t in enumerate(bs):
                ok = []
                for j in range(len(t)):
                    if t.suffix(j) in image:
                        break
                    if j < len(t) - 1 and t.suffix(j) in before:
                        continue
                    ok.append(j)
                if not ok:
                    break
                choices.append(ok)
            else:
                c1a, c2a = TraceSet(before), TraceSet(image)
                for g_combo in itertools.product(*choices):
                    strict = frozenset().union(*(b_parts[k][j][0] for k, j in enumerate(g_combo)))
                    upto = frozenset().union(*(b_parts[k][j][1] for k, j in enumerate(g_combo)))
                    key = (before, strict, image, upto)
                    if key in seen:
                        continue
                    seen.add(key)
                    kids = (SepInstance(c1a, TraceSet(strict)), SepInstance(c2a, TraceSet(upto)))
                    rule = Until(dict(zip(as_, f_combo)), dict(zip(bs, g_combo)))
                    out.append((rule, kids))
        e.until = out
        return out

    def _find(self, inst: SepInstance, e: _Entry, t: int) -> bool:
        """Is there a tree of size ``t``? (All smaller sizes are already excluded.)"""
        if t < 2:
            return False
        opts = self.options(inst, e)
        if "U" in self.fragment.ops and t >= 3:
            opts = itertools.chain(opts, self.until_options(inst, e))
        for rule, kids in opts:
            if len(kids) == 1:
                s = self.best(kids[0], t - 1)
                if s is not None:
                    e.choice = (rule, kids)
                    return True
                continue
            c1, c2 = kids
            e1, e2 = self.entry(c1), self.entry(c2)
            if e1.lb + e2.lb > t - 1:
                continue
            s1 = self.best(c1, t - 1 - e2.lb)
            if s1 is None:
                continue
            if self.best(c2, t - 1 - s1) is not None:
                e.choice = (rule, kids)
                return True
        return False

    def tree(self, inst: SepInstance) -> DeductionTree:
        e = self.memo[inst]
        rule, kids = e.choice
        return DeductionTree(inst, rule, tuple(self.tree(k) for k in kids))


def min_search(a: Iterable[Trace], b: Iterable[Trace], cfg: SearchConfig | None = None) -> SearchResult:
    """Minimal deduction tree for ⟨A, B⟩ in ``cfg.fragment``.

    Raises Unseparable when no separator exists at all, BudgetExceeded when
    none exists within ``cfg.budget`` and separability is not decided.
    """
    cfg = cfg or SearchConfig()
    inst = SepInstance(a, b)
    ap = frozenset(cfg.ap) if cfg.ap is not None else inst.props()
    if inst.overlapping():
        raise Unseparable("A ∩ B nonempty")
    verdict = separability(inst, cfg.fragment, ap)
    if verdict is False:
        raise Unseparable(f"no {cfg.fragment.name} formula separates these sets")
    limit = cfg.budget
    enough = sufficient_budget(inst, cfg.fragment, ap) if verdict else None
    if enough is not None:
        limit = min(limit, enough)
    engine = Engine(cfg.fragment, ap, cfg.prune, cfg.measure, cfg.measure_ops)
    if cfg.mode == "parallel":
        size = _parallel_best(engine, inst, limit, cfg.workers)
    else:
        size = engine.best(inst, limit)
    if size is None:
        if enough is not None and limit == enough:
            raise Unseparable(f"exhausted the sufficient budget {enough}")
        raise BudgetExceeded(f"no deduction tree of size <= {cfg.budget}")
    return SearchResult(size, engine.tree(inst), {"expanded": engine.expanded, "memo": len(engine.memo)})


# ---------------------------------------------------------------- parallel mode


def _option_cost(args) -> tuple[int | None, list]:
    fragment, ap, prune, kids, limit = args
    eng = Engine(fragment, ap, prune)
    if len(kids) == 1:
        s = eng.best(kids[0], limit - 1)
        if s is None:
            return None, []
        return 1 + s, [eng.tree(kids[0])]
    s1 = eng.best(kids[0], limit - 2)
    if s1 is None:
        return None, []
    s2 = eng.best(kids[1], limit - 1 - s1)
    if s2 is None:
        return None, []
    return 1 + s1 + s2, [eng.tree(k) for k in kids]


def _parallel_best(engine: Engine, inst: SepInstance, limit: int, workers: int | None) -> int | None:
    """Fan the root's rule options out to worker processes; each computes the
    exact cost of its option, and the root keeps the cheapest (first on ties)."""
    e = engine.entry(inst)
    if e.exact is not None:
        return e.exact if e.exact <= limit else None
    if e.lb == INF:
        return None
    opts = list(engine.options(inst, e))
    if "U" in engine.fragment.ops:
        opts += engine.until_options(inst, e)
    jobs = [(engine.fragment, engine.ap, engine.prune, kids, limit) for _, kids in opts]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_option_cost, jobs, chunksize=max(1, len(jobs) // 32)))
    best = None
    for (rule, kids), (cost, subtrees) in zip(opts, results):
        if cost is not None and (best is None or cost < best[0]):
            best = (cost, rule, kids, subtrees)
    if best is None:
        e.lb = limit + 1
        return None
    cost, rule, kids, subtrees = best
    for k, sub in zip(kids, subtrees):
        _store(engine, sub)
    e.exact, e.choice = cost, (rule, kids)
    return cost


def _store(engine: Engine, t: DeductionTree) -> None:
    e = engine.memo.get(t.instance) or _Entry(t.size)
    e.exact = t.size
    e.choice = (t.rule, tuple(c.instance for c in t.children))
    engine.memo[t.instance] = e
    for c in t.children:
        _store(engine, c)
