import random
from fractions import Fraction

import pytest

from ltlsep.measures import (
    NotPropositional, check_axioms, delta1, delta1_v2, measure_bound_v1, measure_bound_v2,
    parity_instance, projected_delta1_bound,
)
from ltlsep.proof import SepInstance
from ltlsep.traces import Trace, TraceSet

from support import ws


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_parity_delta1(k):
    inst = parity_instance(k)
    assert len(inst.a) == len(inst.b) == 2 ** (k - 1)
    assert delta1(inst.a, inst.b) == k * 2 ** (k - 1)
    assert measure_bound_v1(inst.a, inst.b, delta1) == k * k


def test_delta1_floor_and_domain():
    # no pair at distance one still gives 1
    a = TraceSet([Trace([["p", "q"]])])
    b = TraceSet([Trace([[]])])
    assert delta1(a, b) == 1
    with pytest.raises(NotPropositional):
        delta1(ws("ab"), b)


def test_v2_measure_and_bound():
    inst = parity_instance(2)
    assert delta1_v2(inst.a, inst.b) == Fraction(16, 4)
    assert measure_bound_v2(inst.a, inst.b, delta1_v2) == 4


def test_projected_bound():
    inst = parity_instance(3)
    assert projected_delta1_bound(inst) == 9
    # longer traces are projected onto their first letters
    assert projected_delta1_bound(SepInstance(ws("ab", "aa"), ws("ba"))) == 1
    assert projected_delta1_bound(SepInstance(ws("ab"), ws("aa"))) == 0


@pytest.mark.parametrize("k", [2, 3, 4])
def test_delta1_axioms_hold(k):
    inst = parity_instance(k)
    report = check_axioms(delta1, inst.a, inst.b, samples=200, rng=random.Random(k))
    assert report.ok, report.violations[:3]
    assert report.checked >= 400


def test_superadditive_measure_is_caught():
    def squared(a, b):
        return (len(a) * len(b)) ** 2

    inst = parity_instance(3)
    report = check_axioms(squared, inst.a, inst.b, samples=200, rng=random.Random(0))
    assert not report.ok


def test_v2_axioms():
    inst = parity_instance(3)
    report = check_axioms(lambda a, b: 1, inst.a, inst.b, samples=50, variant="v2")
    assert report.ok
    report = check_axioms(lambda a, b: 2, inst.a, inst.b, samples=50, variant="v2")
    assert not report.ok
