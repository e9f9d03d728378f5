"""Seeded generators for random traces, instances and formulas."""
from __future__ import annotations

import random
from typing import Sequence

from .formula import And, Formula, Lit, Or, U, UNARY_CLASSES
from .traces import Trace, TraceSet


def random_trace(rng: random.Random, ap: Sequence[str], max_len: int, min_len: int = 1) -> Trace:
    n = rng.randint(min_len, max_len)
    return Trace([[p for p in ap if rng.random() < 0.5] for _ in range(n)])


def random_instance(
    rng: random.Random,
    ap: Sequence[str],
    max_a: int = 3,
    max_b: int = 3,
    max_len: int = 4,
) -> tuple[TraceSet, TraceSet]:
    """Two nonempty sets; they may overlap, which callers use as a test case."""
    a = TraceSet(random_trace(rng, ap, max_len) for _ in range(rng.randint(1, max_a)))
    b = TraceSet(random_trace(rng, ap, max_len) for _ in range(rng.randint(1, max_b)))
    return a, b


def random_formula(rng: random.Random, ap: Sequence[str], size: int, ops: Sequence[str]) -> Formula:
    """A formula with ``size`` nodes using the unary tokens in ``ops``.

    "U" in ``ops`` enables until as a binary node. Without unary operators only
    odd sizes exist, so an even ``size`` is rounded down.
    """
    unary = [t for t in ops if t != "U"]
    binaries: list[type] = [And, Or] + ([U] if "U" in ops else [])
    if not unary and size % 2 == 0:
        size -= 1
    if size <= 1:
        return Lit(rng.choice(list(ap)), rng.random() < 0.5)
    if unary and (size == 2 or rng.random() < 0.4):
        return UNARY_CLASSES[rng.choice(unary)](random_formula(rng, ap, size - 1, ops))
    k = rng.randint(1, size - 2) if unary else rng.randrange(1, size - 1, 2)
    cls = rng.choice(binaries)
    return cls(random_formula(rng, ap, k, ops), random_formula(rng, ap, size - 1 - k, ops))
