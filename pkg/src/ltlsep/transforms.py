"""Temporal reversal and the conjunctive-reduct normal form for the X/F fragment."""
from __future__ import annotations

from dataclasses import dataclass

from .formula import (
    And, Binary, F, Formula, Lit, Or, U, UNARY_CLASSES, Unary, X,
    big_or, is_pure_future, is_pure_past, operators,
)

_SWAP = {"X": "Y", "wX": "wY", "F": "O", "G": "H", "Y": "X", "wY": "wX", "O": "F", "H": "G"}


class TransformError(ValueError):
    pass


def _swap(f: Formula) -> Formula:
    if isinstance(f, Lit):
        return f
    if isinstance(f, Unary):
        return UNARY_CLASSES[_SWAP[f.token]](_swap(f.child))
    if isinstance(f, U):
        raise TransformError("U has no past counterpart here")
    return type(f)(_swap(f.left), _swap(f.right))


def reverse_formula(f: Formula) -> Formula:
    """Swap each future operator for its past mirror and vice versa.

    Pure-past and pure-future inputs are mirrored operator by operator
    (Y↔X, wY↔wX, O↔F, H↔G). An eventually-past formula F(α) is mapped to
    F(α mirrored), which defines the reversed language.
    """
    if "U" in operators(f):
        raise TransformError("formulas with U cannot be reversed")
    if is_pure_past(f) or is_pure_future(f):
        return _swap(f)
    if isinstance(f, F) and is_pure_past(f.child):
        return F(_swap(f.child))
    raise TransformError(f"mixed-tense formula: {f}")


def reverse_eventually(f: Formula) -> Formula:
    """F(α) with α pure past, to F(α mirrored): σ ⊨ F(α) iff σ reversed ⊨ the result."""
    if not isinstance(f, F) or not is_pure_past(f.child) or "U" in operators(f):
        raise TransformError(f"expected F applied to a pure-past formula, got {f}")
    return F(_swap(f.child))


@dataclass(frozen=True)
class ReductSet:
    source: Formula
    members: frozenset[Formula]

    def ordered(self) -> list[Formula]:
        return sorted(self.members, key=str)

    def __len__(self) -> int:
        return len(self.members)


def _check_xf(f: Formula):
    bad = operators(f) - {"X", "F"}
    if bad:
        raise TransformError(f"operators outside X/F: {', '.join(sorted(bad))}")


def _reducts(f: Formula) -> frozenset[Formula]:
    if isinstance(f, Lit):
        return frozenset({f})
    if isinstance(f, Or):
        return _reducts(f.left) | _reducts(f.right)
    if isinstance(f, And):
        right = _reducts(f.right)
        return frozenset(And(l, r) for l in _reducts(f.left) for r in right)
    if isinstance(f, (X, F)):
        return frozenset(type(f)(c) for c in _reducts(f.child))
    raise TransformError(f"unexpected node {f}")


def conjunctive_reducts(f: Formula) -> ReductSet:
    """All ways of resolving every ∨ to one of its sides, bottom-up."""
    _check_xf(f)
    return ReductSet(f, _reducts(f))


def dnf(f: Formula) -> Formula:
    """Right-leaning disjunction of the conjunctive reducts, sorted by printed form."""
    return big_or(conjunctive_reducts(f).ordered())


def count_disjunctions(f: Formula) -> int:
    if isinstance(f, Lit):
        return 0
    if isinstance(f, Unary):
        return count_disjunctions(f.child)
    assert isinstance(f, Binary)
    return int(isinstance(f, Or)) + count_disjunctions(f.left) + count_disjunctions(f.right)
