"""The hard instance family: Enum words, the A/B trace sets, Φ_n and Φ_n'.

Propositions are named ``pt``/``qt`` for the two markers and ``p1..pn``,
``q1..qn`` for the indexed ones. A type is a frozenset of names holding
exactly one marker plus indexed propositions of the same side.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formula import F, Formula, Lit, O, big_and, big_or
from .traces import Letter, Trace, TraceSet, reverse_set

Type = frozenset

MAX_N = 8


def alpha(n: int) -> int:
    """Padding length 2^(n+1)·(n+2)²."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 2 ** (n + 1) * (n + 2) ** 2


def _check_n(n: int, allow_large: bool = False):
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > MAX_N:
        if not allow_large:
            raise ValueError(f"n={n} exceeds the cap of {MAX_N}; pass allow_large=True to override")
        warnings.warn(f"building the n={n} family; traces have about {2 ** n * alpha(n)} letters")


def q_types(n: int) -> list[Type]:
    """All of T_Q in the default order (binary counting, q1 the lowest bit)."""
    return [
        frozenset({"qt"} | {f"q{i + 1}" for i in range(n) if mask >> i & 1})
        for mask in range(2 ** n)
    ]


def p_types(n: int) -> list[Type]:
    return [bar(t) for t in q_types(n)]


def default_order(n: int) -> list[Type]:
    return q_types(n)


def _side(tau: Iterable[str]) -> str | None:
    tau = frozenset(tau)
    for marker, prefix in (("qt", "q"), ("pt", "p")):
        if marker in tau:
            rest = tau - {marker}
            if all(x[:1] == prefix and x[1:].isdigit() and int(x[1:]) >= 1 for x in rest):
                return marker
    return None


def is_type(tau: Iterable[str], n: int | None = None) -> bool:
    side = _side(tau)
    if side is None:
        return False
    return n is None or all(int(x[1:]) <= n for x in tau if x != side)


def bar(tau: Iterable[str]) -> Type:
    """Swap p-side and q-side names: pt↔qt and pi↔qi."""
    tau = frozenset(tau)
    if _side(tau) is None:
        raise ValueError(f"not a type: {sorted(tau)}")
    swap = {"p": "q", "q": "p"}
    return frozenset(swap[x[0]] + x[1:] for x in tau)


def _validate_order(order: Sequence[Type], n: int) -> list[Type]:
    order = [frozenset(t) for t in order]
    if len(set(order)) != len(order) or set(order) != set(q_types(n)):
        raise ValueError("order must list every type of T_Q exactly once")
    return order


@dataclass(frozen=True)
class FamilyParams:
    n: int
    order: tuple[Type, ...] | None = None
    prefixes: tuple[int, ...] = (0,)
    allow_large: bool = False

    def resolved_order(self) -> list[Type]:
        if self.order is None:
            return default_order(self.n)
        return _validate_order(self.order, self.n)


def build_enum(n: int, order: Sequence[Type] | None = None, allow_large: bool = False) -> Trace:
    """(∅^α · τ)* over T_Q in ``order``, followed by ∅^α."""
    _check_n(n, allow_large)
    order = default_order(n) if order is None else _validate_order(order, n)
    pad = [()] * alpha(n)
    letters: list[Iterable[str]] = []
    for tau in order:
        letters += pad
        letters.append(tau)
    letters += pad
    return Trace(letters)


def enum_minus(enum: Trace, tau: Iterable[str]) -> Trace:
    """Drop the position labelled ``tau`` together with the padding before it."""
    tau = frozenset(tau)
    if _side(tau) != "qt":
        raise ValueError(f"{sorted(tau)} is not in T_Q")
    letters = enum.letters
    hits = [i for i, a in enumerate(letters) if a == tau]
    if len(hits) != 1:
        raise ValueError(f"{sorted(tau)} does not occur exactly once")
    i = hits[0]
    n = _enum_n(letters)
    start = i - alpha(n)
    if start < 0 or any(letters[start:i]):
        raise ValueError("the type is not preceded by a full padding block")
    return Trace(letters[:start] + letters[i + 1:])


def _enum_n(letters: Sequence[Letter]) -> int:
    # number of type positions is 2^n
    count = sum(1 for a in letters if a)
    n = count.bit_length() - 1
    if count != 2 ** n or n < 1:
        raise ValueError("not an Enum word")
    return n


def build_phi_n(n: int) -> Formula:
    """F(qt ∧ ⋀_i ((qi ∧ O(pt ∧ pi)) ∨ (¬qi ∧ O(pt ∧ ¬pi))))."""
    if n < 1:
        raise ValueError("n must be at least 1")
    pt, qt = Lit("pt"), Lit("qt")
    parts = []
    for i in range(1, n + 1):
        q, p = Lit(f"q{i}"), Lit(f"p{i}")
        parts.append((q & O(pt & p)) | (q.negate() & O(pt & p.negate())))
    return F(qt & big_and(parts))


def build_phi_n_prime(n: int) -> Formula:
    """The F-only equivalent of Φ_n: one disjunct per assignment to p1..pn."""
    if n < 1:
        raise ValueError("n must be at least 1")
    pt, qt = Lit("pt"), Lit("qt")
    disjuncts = []
    for mask in range(2 ** n):
        bits = [bool(mask >> i & 1) for i in range(n)]
        psi = big_and(Lit(f"q{i + 1}", b) for i, b in enumerate(bits))
        tail = F(qt & psi)
        disjuncts.append(big_and(F(pt & (Lit(f"p{i + 1}", b) & tail)) for i, b in enumerate(bits)))
    return big_or(disjuncts)


def phi_n_prime_size(n: int) -> int:
    return 2 ** n * n * (2 * n + 8) - 1


@dataclass
class Family:
    params: FamilyParams
    enum: Trace
    a: TraceSet
    b: TraceSet
    # (j, τ) behind each member, for inspection
    origin: dict[Trace, tuple[int, Type]] = field(default_factory=dict)


def build_family(params: FamilyParams) -> Family:
    n = params.n
    _check_n(n, params.allow_large)
    order = params.resolved_order()
    enum = build_enum(n, order, allow_large=True)
    a, b, origin = [], [], {}
    for j in params.prefixes:
        if j < 0:
            raise ValueError("prefix lengths must be nonnegative")
        head = [()] * j
        for tau in order:
            x = Trace(head + [bar(tau)] + list(enum.letters))
            y = Trace(head + [bar(tau)] + list(enum_minus(enum, tau).letters))
            a.append(x)
            b.append(y)
            origin[x] = origin[y] = (j, tau)
    return Family(params, enum, TraceSet(a), TraceSet(b), origin)


def build_AB(
    n: int,
    prefixes: Iterable[int] = (0,),
    order: Sequence[Type] | None = None,
    allow_large: bool = False,
) -> tuple[TraceSet, TraceSet]:
    fam = build_family(FamilyParams(n, None if order is None else tuple(order), tuple(prefixes), allow_large))
    return fam.a, fam.b


def approx_witness(a: Trace, b: Trace, n: int) -> tuple[int, Type] | None:
    """A common (u, ρ) with both traces in ∅^u · ρ · ∅^α · Σ*, if any."""
    wa, wb = _shape(a, n), _shape(b, n)
    if wa is not None and wa == wb:
        return wa
    return None


def approx(a: Trace, b: Trace, n: int) -> bool:
    return approx_witness(a, b, n) is not None


def _shape(t: Trace, n: int) -> tuple[int, Type] | None:
    # the (u, ρ) of the unique decomposition, when it exists
    letters = t.letters
    u = 0
    while u < len(letters) and not letters[u]:
        u += 1
    if u == len(letters):
        return None
    rho = letters[u]
    if not is_type(rho, n):
        return None
    pad = letters[u + 1:u + 1 + alpha(n)]
    if len(pad) < alpha(n) or any(pad):
        return None
    return u, rho


def pairs_C(a: Iterable[Trace], b: Iterable[Trace], n: int) -> list[tuple[Trace, Trace]]:
    bs = list(b)
    # bucket b by shape so large sets stay cheap
    by_shape: dict[tuple[int, Type], list[Trace]] = {}
    for y in bs:
        s = _shape(y, n)
        if s is not None:
            by_shape.setdefault(s, []).append(y)
    out = []
    for x in a:
        s = _shape(x, n)
        if s is not None:
            out.extend((x, y) for y in by_shape.get(s, ()))
    return out


def count_C(a: Iterable[Trace], b: Iterable[Trace], n: int) -> int:
    return len(pairs_C(a, b, n))


def first_type(t: Trace) -> Type | None:
    for x in t.letters:
        if x:
            return x
    return None


def reverse_instance(a: Iterable[Trace], b: Iterable[Trace]) -> tuple[TraceSet, TraceSet]:
    return reverse_set(a), reverse_set(b)


def order_rank(order: Sequence[Type]) -> dict[Type, int]:
    return {frozenset(t): i for i, t in enumerate(order)}

