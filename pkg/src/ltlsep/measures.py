"""Sub-additive proof measures for the propositional rules (Atomic, Or, And)."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable

from .proof import SepInstance, atomic_literals
from .traces import Letter, Trace, TraceSet

Measure = Callable[[TraceSet, TraceSet], "int | Fraction"]


class NotPropositional(ValueError):
    pass


def _letters(ts: Iterable[Trace]) -> list[Letter]:
    out = []
    for t in ts:
        if len(t) != 1:
            raise NotPropositional(f"trace {t} has length {len(t)}, expected single letters")
        out.append(t[0])
    return out


def hamming_pairs(a: Iterable[Letter], b: Iterable[Letter]) -> int:
    bs = list(b)
    return sum(1 for x in a for y in bs if len(x ^ y) == 1)


def delta1(a: Iterable[Trace], b: Iterable[Trace]) -> int:
    """max(1, number of pairs at Hamming distance 1), over single-letter traces."""
    return max(1, hamming_pairs(_letters(a), _letters(b)))


def delta1_v2(a: TraceSet, b: TraceSet) -> Fraction:
    """The version-2 measure derived from δ₁: δ₁² / (|A|·|B|)."""
    if not a or not b:
        return Fraction(1)
    return Fraction(delta1(a, b) ** 2, len(a) * len(b))


def measure_bound_v1(a: TraceSet, b: TraceSet, mu: Measure) -> Fraction:
    if not a or not b:
        raise ValueError("the bound needs nonempty sets")
    return Fraction(mu(a, b)) ** 2 / (len(a) * len(b))


def measure_bound_v2(a: TraceSet, b: TraceSet, mu: Measure) -> Fraction:
    return Fraction(mu(a, b))


def projected_delta1_bound(inst: SepInstance) -> int:
    """Lower bound on propositional trees for ``inst`` via its first letters.

    Propositional formulas only read the first letter, so a tree for ⟨A,B⟩ is
    a tree for the first-letter instance, to which δ₁ applies.
    """
    a0 = {t[0] for t in inst.a}
    b0 = {t[0] for t in inst.b}
    if not a0 or not b0 or not a0.isdisjoint(b0):
        return 0
    mu = max(1, hamming_pairs(a0, b0))
    return math.ceil(Fraction(mu * mu, len(a0) * len(b0)))


def parity_instance(k: int) -> SepInstance:
    """Odd-weight vs even-weight assignments to p0..p(k-1), as one-letter traces."""
    if k < 1:
        raise ValueError("k must be positive")
    names = [f"p{i}" for i in range(k)]
    a, b = [], []
    for bits in product((0, 1), repeat=k):
        t = Trace([[n for n, x in zip(names, bits) if x]])
        (a if sum(bits) % 2 else b).append(t)
    return SepInstance(a, b)


@dataclass
class AxiomReport:
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _random_split(ts: TraceSet, rng: random.Random) -> tuple[TraceSet, TraceSet]:
    members = ts.ordered()
    mask = [rng.random() < 0.5 for _ in members]
    return (
        TraceSet(t for t, m in zip(members, mask) if m),
        TraceSet(t for t, m in zip(members, mask) if not m),
    )


def check_axioms(
    mu: Measure,
    a: TraceSet,
    b: TraceSet,
    samples: int = 200,
    rng: random.Random | None = None,
    variant: str = "v1",
) -> AxiomReport:
    """Spot-check the measure axioms on random splits of ⟨A, B⟩ and of the parts.

    Checks sub-additivity under splits of A and of B, and the Atomic axiom
    (μ ≤ min(|A|,|B|) for v1, μ ≤ 1 for v2) whenever a literal separates.
    """
    rng = rng or random.Random(0)
    report = AxiomReport()
    cap = (lambda x, y: min(len(x), len(y))) if variant == "v1" else (lambda x, y: 1)

    def atomic_ok(x: TraceSet, y: TraceSet):
        if x and y and atomic_literals(SepInstance(x, y)):
            report.checked += 1
            if mu(x, y) > cap(x, y):
                report.violations.append(f"atomic axiom fails on {x!r} / {y!r}")

    atomic_ok(a, b)
    for _ in range(samples):
        x, y = a, b
        # descend a few random levels so small parts get exercised too
        for _ in range(rng.randint(0, 2)):
            if rng.random() < 0.5 and len(x) > 1:
                x = _random_split(x, rng)[0] or x
            elif len(y) > 1:
                y = _random_split(y, rng)[0] or y
        x1, x2 = _random_split(x, rng)
        y1, y2 = _random_split(y, rng)
        report.checked += 2
        if mu(x, y) > mu(x1, y) + mu(x2, y):
            report.violations.append(f"A-split: {x1!r} + {x2!r} against {y!r}")
        if mu(x, y) > mu(x, y1) + mu(x, y2):
            report.violations.append(f"B-split: {y1!r} + {y2!r} against {x!r}")
        for part in (x1, x2):
            atomic_ok(part, y)
        for part in (y1, y2):
            atomic_ok(x, part)
    return report
