import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from ltlsep.formula import COSAFETY_U, PROP, XF, Lit, parse_formula, size
from ltlsep.proof import (
    AndSplit, Atomic, DeductionTree, Future, Globally, Next, NotSeparating, OrSplit, RuleError,
    SepInstance, Until, WeakNext, atomic_literals, check_rule, dump_tree, formula_from_tree,
    load_tree, tree_from_formula, until_child_sets, verify_tree,
)
from ltlsep.sampling import random_formula, random_instance
from ltlsep.semantics import holds, separates
from ltlsep.traces import TraceSet, word

from support import ABC, worked_instance, worked_tree, formulas_st, traces_st, w, ws


def test_worked_tree_verifies():
    t = worked_tree()
    assert verify_tree(t)
    assert t.size == 5
    assert formula_from_tree(t) == parse_formula("X !p | G p")


def test_worked_tree_with_flipped_leaf_is_rejected():
    v = verify_tree(worked_tree(left_literal=Lit("p")))
    assert not v
    assert v.path == (0, 0)
    assert "invalid at 0/0" in str(v)


def test_check_rule_examples():
    a, b = worked_instance()
    kids = check_rule(SepInstance(a, b), OrSplit(ws("abaa"), ws("aaaa")))
    assert kids == (SepInstance(ws("abaa"), b), SepInstance(ws("aaaa"), b))
    assert check_rule(SepInstance(ws("aaaa", "aaa", "aa", "a"), ws("b")), Atomic(Lit("p"))) == ()
    with pytest.raises(RuleError):
        check_rule(SepInstance(ws("a"), ws("ab")), Next())
    # weak next only needs the B side to continue
    assert check_rule(SepInstance(ws("a"), ws("ab")), WeakNext()) == (SepInstance(TraceSet(), ws("b")),)
    with pytest.raises(RuleError):
        check_rule(SepInstance(ws("ab"), ws("a")), WeakNext())
    with pytest.raises(RuleError):
        check_rule(SepInstance(a, b), OrSplit(ws("abaa"), ws("abaa")))
    with pytest.raises(RuleError):
        check_rule(SepInstance(a, b), AndSplit(ws("aaab"), ws("aaab", "b")))


def test_check_rule_respects_fragment():
    inst = SepInstance(ws("ab"), ws("b"))
    with pytest.raises(RuleError):
        check_rule(inst, WeakNext(), XF)
    with pytest.raises(RuleError):
        check_rule(inst, Future({w("ab"): 0}), PROP)


def test_future_and_globally_children():
    inst = SepInstance(ws("ab"), ws("ba"))
    assert check_rule(inst, Future({w("ab"): 1})) == (SepInstance(ws("b"), ws("ba", "a")),)
    assert check_rule(inst, Globally({w("ba"): 1})) == (SepInstance(ws("ab", "b"), ws("a")),)
    with pytest.raises(RuleError):
        check_rule(inst, Future({w("ab"): 2}))


def test_until_child_sets():
    a = TraceSet([word("aaab", ABC)])
    b = TraceSet([word("aaaa", ABC), word("acb", ABC)])
    last = {t: len(t) - 1 for t in b}
    first, second = until_child_sets(a, b, {t: 0 for t in a}, last)
    assert first.b == TraceSet()
    assert first.a == TraceSet()
    # the derivation for (a U b)
    f = {word("aaab", ABC): 3}
    g = {word("aaaa", ABC): 3, word("acb", ABC): 1}
    left, right = until_child_sets(a, b, f, g)
    assert left == SepInstance(TraceSet(word(s, ABC) for s in ("aaab", "aab", "ab")), TraceSet([word("cb", ABC)]))
    assert right.a == TraceSet([word("b", ABC)])
    assert right.b == TraceSet(word(s, ABC) for s in ("aaaa", "aaa", "aa", "a", "acb", "cb"))
    tree = DeductionTree(SepInstance(a, b), Until(f, g), (
        DeductionTree(left, Atomic(Lit("a"))),
        DeductionTree(right, Atomic(Lit("b"))),
    ))
    assert verify_tree(tree, COSAFETY_U)
    assert tree.size == 3 and formula_from_tree(tree) == parse_formula("(a U b)")


def test_atomic_literal_order():
    inst = SepInstance([word("ab", ABC)], [word("ba", ABC)])
    assert atomic_literals(inst) == [Lit("a"), Lit("b", False)]


def test_tree_from_formula_examples():
    a, b = worked_instance()
    t = tree_from_formula(a, b, parse_formula("X !p | G p"))
    assert verify_tree(t) and t.size == 5
    t = tree_from_formula(a, b, parse_formula("F G p"))
    assert verify_tree(t) and t.size == 3
    t = tree_from_formula(ws("a"), ws("b"), Lit("p"))
    assert t.size == 1 and isinstance(t.rule, Atomic)
    with pytest.raises(NotSeparating):
        tree_from_formula(a, b, parse_formula("G p"))


def test_and_split_gives_conjunction():
    inst = SepInstance([word("ab", ABC)], [word("b", ABC), word("c", ABC)])
    t = DeductionTree(inst, AndSplit(TraceSet([word("b", ABC)]), TraceSet([word("c", ABC)])), (
        DeductionTree(SepInstance(inst.a, [word("b", ABC)]), Atomic(Lit("a"))),
        DeductionTree(SepInstance(inst.a, [word("c", ABC)]), Atomic(Lit("c", False))),
    ))
    assert verify_tree(t)
    assert formula_from_tree(t) == parse_formula("a & !c")


def test_json_round_trip():
    t = worked_tree()
    again = load_tree(dump_tree(t))
    assert again == t
    assert verify_tree(again)


@settings(max_examples=200, deadline=None)
@given(
    formulas_st(ops=("X", "wX", "F", "G", "U"), max_leaves=4),
    st.lists(traces_st(max_len=5), min_size=2, max_size=8),
)
def test_round_trip_property(f, traces):
    # split the sample by f itself, so f separates by construction
    a = TraceSet(t for t in traces if holds(t, f))
    b = TraceSet(t for t in traces if not holds(t, f))
    assume(a and b)
    t = tree_from_formula(a, b, f)
    assert verify_tree(t)
    assert t.size == size(f)
    g = formula_from_tree(t)
    assert size(g) == size(f) and separates(g, a, b)
    assert load_tree(dump_tree(t)) == t


def test_round_trip_on_seeded_samples():
    rng = random.Random(7)
    done = 0
    while done < 60:
        f = random_formula(rng, "pq", rng.randint(1, 7), ["X", "wX", "F", "G", "U"])
        a, b = random_instance(rng, "pq", 4, 4, 6)
        if not separates(f, a, b):
            continue
        t = tree_from_formula(a, b, f)
        assert verify_tree(t) and t.size == size(f)
        done += 1
