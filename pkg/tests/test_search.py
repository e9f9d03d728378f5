import random

import pytest
from hypothesis import given, settings

from ltlsep.formula import COSAFETY_U, PROP, PURE_PAST, XF, XWXFG, parse_formula, size
from ltlsep.measures import parity_instance
from ltlsep.proof import SepInstance, verify_tree
from ltlsep.sampling import random_instance
from ltlsep.search import (
    BudgetExceeded, Engine, SearchConfig, Unseparable, characteristic_separator, min_search,
    separability, sufficient_budget,
)
from ltlsep.semantics import separates
from ltlsep.traces import TraceSet, word

from support import ABC, engine_verdict, worked_instance, oracle_verdict, trace_sets_st, ws


def run(a, b, fragment=XWXFG, budget=10, **kw):
    return min_search(a, b, SearchConfig(fragment, budget, **kw))


def test_worked_minimum():
    r = run(*worked_instance())
    assert r.size == 3
    assert verify_tree(r.tree, XWXFG)
    assert separates(r.formula, *worked_instance())


def test_three_letter_example_sizes():
    a = TraceSet(word(s, ABC) for s in ("abb", "aaa"))
    b = TraceSet(word(s, ABC) for s in ("baa", "aba"))
    assert run(a, b, XF).size == 7
    assert run(a, b, XWXFG).size == 5
    assert run(a, b, COSAFETY_U).size == 5


def test_until_shortens_a_three_letter_instance():
    a = TraceSet([word("aaab", ABC)])
    b = TraceSet(word(s, ABC) for s in ("aaaa", "acb"))
    r = run(a, b, COSAFETY_U)
    assert r.size == 3 and r.formula == parse_formula("(a U b)")
    assert run(a, b, XWXFG).size == 4


def test_overlap_is_unseparable():
    with pytest.raises(Unseparable, match="A ∩ B nonempty"):
        run(ws("ab"), ws("ab"))


def test_budget_exceeded_is_distinct():
    with pytest.raises(BudgetExceeded):
        run(*worked_instance(), budget=2)


def test_prop_certificate():
    # same first letter: no propositional formula can separate
    with pytest.raises(Unseparable):
        run(ws("ab"), ws("aa"), PROP)
    assert separability(SepInstance(ws("ab"), ws("aa")), PROP) is False
    assert separability(SepInstance(ws("ab"), ws("aa")), XWXFG) is True


def test_x_without_wx_needs_no_prefix():
    # every X/F formula true on "a" is true on its extensions
    inst = SepInstance(ws("a"), ws("ab"))
    assert separability(inst, XF) is False
    with pytest.raises(Unseparable):
        run(ws("a"), ws("ab"), XF)
    assert run(ws("a"), ws("ab"), XWXFG).size == 2


def test_characteristic_separator_separates():
    rng = random.Random(3)
    for _ in range(40):
        a, b = random_instance(rng, "pq", 3, 3, 4)
        for fr in (PROP, XF, XWXFG):
            inst = SepInstance(a, b)
            f = characteristic_separator(inst, fr, "pq")
            if f is None:
                continue
            assert f in fr and separates(f, a, b)
            assert sufficient_budget(inst, fr, "pq") == size(f)


def test_parallel_matches_sequential():
    cases = [
        worked_instance(),
        (TraceSet(word(s, ABC) for s in ("abb", "aaa")), TraceSet(word(s, ABC) for s in ("baa", "aba"))),
        (parity_instance(2).a, parity_instance(2).b),
    ]
    for a, b in cases:
        seq = run(a, b, XF)
        par = run(a, b, XF, mode="parallel", workers=2)
        assert par.size == seq.size
        assert verify_tree(par.tree, XF)
        assert separates(par.formula, a, b)


def test_sequential_mode_is_deterministic():
    a, b = worked_instance()
    assert str(run(a, b).formula) == str(run(a, b).formula)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(budget=0)
    with pytest.raises(ValueError):
        SearchConfig(mode="threads")
    with pytest.raises(ValueError):
        Engine(PURE_PAST, frozenset("p"))


def test_parity_sizes():
    inst = parity_instance(2)
    assert run(inst.a, inst.b, PROP, 20).size == 7
    inst = parity_instance(3)
    assert run(inst.a, inst.b, PROP, 30).size == 19


@settings(max_examples=60, deadline=None)
@given(trace_sets_st(max_len=3, max_size=2), trace_sets_st(max_len=3, max_size=2))
def test_engine_agrees_with_oracle(a, b):
    for fr in (PROP, XF, XWXFG):
        assert engine_verdict(a, b, fr, 7, ap="pq") == oracle_verdict(a, b, fr, 7, ap="pq")


@settings(max_examples=40, deadline=None)
@given(trace_sets_st(max_len=3, max_size=3), trace_sets_st(max_len=3, max_size=3))
def test_pruning_does_not_change_sizes(a, b):
    for fr in (PROP, XF):
        assert engine_verdict(a, b, fr, 7, prune=True) == engine_verdict(a, b, fr, 7, prune=False)


@settings(max_examples=40, deadline=None)
@given(trace_sets_st(max_len=3, max_size=3), trace_sets_st(max_len=3, max_size=3))
def test_witness_is_valid(a, b):
    try:
        r = min_search(a, b, SearchConfig(XWXFG, 8))
    except (Unseparable, BudgetExceeded):
        return
    assert verify_tree(r.tree, XWXFG)
    assert r.tree.size == r.size == size(r.formula)
    assert separates(r.formula, a, b)
