"""Shared helpers and hypothesis strategies for the test suite."""
from __future__ import annotations

from hypothesis import strategies as st

from ltlsep.formula import And, Lit, Or, U, UNARY_CLASSES
from ltlsep.oracle import OracleUnseparable, brute_force_min_formula
from ltlsep.search import BudgetExceeded, SearchConfig, Unseparable, min_search
from ltlsep.traces import Trace, TraceSet, all_letters, word

# a = {p}, b = ∅, as in the small worked examples
AB = {"a": {"p"}, "b": ()}
ABC = {"a": {"a"}, "b": {"b"}, "c": {"c"}}


def w(text: str, alphabet=AB) -> Trace:
    return word(text, alphabet)


def ws(*texts: str, alphabet=AB) -> TraceSet:
    return TraceSet(word(t, alphabet) for t in texts)


def letters_st(ap=("p", "q")):
    return st.sampled_from(all_letters(ap))


def traces_st(ap=("p", "q"), max_len=4):
    return st.lists(letters_st(ap), min_size=1, max_size=max_len).map(Trace)


def trace_sets_st(ap=("p", "q"), max_len=4, max_size=3):
    return st.lists(traces_st(ap, max_len), min_size=1, max_size=max_size).map(TraceSet)


def formulas_st(ops=("X", "wX", "F", "G"), ap=("p", "q"), max_leaves=4):
    lits = st.builds(Lit, st.sampled_from(ap), st.booleans())
    unary = [UNARY_CLASSES[t] for t in ops if t != "U"]
    binary = [And, Or] + ([U] if "U" in ops else [])

    def extend(children):
        options = [st.builds(cls, children, children) for cls in binary]
        options += [st.builds(cls, children) for cls in unary]
        return st.one_of(options)

    return st.recursive(lits, extend, max_leaves=max_leaves)


def engine_verdict(a, b, fragment, max_size=8, prune=True, ap=None):
    try:
        cfg = SearchConfig(fragment, max_size, prune=prune, ap=None if ap is None else frozenset(ap))
        return ("size", min_search(a, b, cfg).size)
    except Unseparable:
        return ("unseparable", None)
    except BudgetExceeded:
        return ("none", None)


def oracle_verdict(a, b, fragment, max_size=8, ap=None):
    try:
        r = brute_force_min_formula(a, b, fragment, max_size, ap=ap)
    except OracleUnseparable:
        return ("unseparable", None)
    return ("none", None) if r is None else ("size", r.size)


def worked_instance():
    return ws("abaa", "aaaa"), ws("aaab")


def worked_tree(left_literal=None):
    """The hand-built tree (X¬p) ∨ (G p) for ⟨{abaa, aaaa}, {aaab}⟩."""
    from ltlsep.proof import Atomic, DeductionTree, Globally, Next, OrSplit, SepInstance

    left_literal = left_literal or Lit("p", False)
    a, b = worked_instance()
    left = DeductionTree(
        SepInstance(ws("abaa"), b), Next(),
        (DeductionTree(SepInstance(ws("baa"), ws("aab")), Atomic(left_literal)),),
    )
    right = DeductionTree(
        SepInstance(ws("aaaa"), b), Globally({w("aaab"): 3}),
        (DeductionTree(SepInstance(ws("aaaa", "aaa", "aa", "a"), ws("b")), Atomic(Lit("p"))),),
    )
    return DeductionTree(SepInstance(a, b), OrSplit(ws("abaa"), ws("aaaa")), (left, right))
