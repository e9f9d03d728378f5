"""Deterministic automata over explicit letter alphabets.

The same table is read as a DFA (finite words) or a DBA (Büchi acceptance on
lasso words). Formulas are compiled by progression: a state is a positive
Boolean combination, kept as a DNF, of obligations on the next position.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .formula import (
    And, F, Formula, G, Lit, Or, WX, X, operators, props,
)
from .traces import Letter, Trace, all_letters, format_letter

MAX_AP = 4


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Dfa:
    letters: tuple[Letter, ...]
    delta: tuple[tuple[int, ...], ...]
    initial: int
    accepting: frozenset[int]

    def __post_init__(self):
        n = len(self.delta)
        if not self.letters:
            raise AutomatonError("alphabet is empty")
        if not 0 <= self.initial < n:
            raise AutomatonError("initial state out of range")
        for row in self.delta:
            if len(row) != len(self.letters) or any(not 0 <= q < n for q in row):
                raise AutomatonError("transition table is not total")
        if any(not 0 <= q < n for q in self.accepting):
            raise AutomatonError("accepting state out of range")

    @property
    def states(self) -> int:
        return len(self.delta)

    def letter_index(self, a: Letter) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise AutomatonError(f"letter {format_letter(a)} is not in the alphabet") from None

    @property
    def _index(self) -> dict[Letter, int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {a: i for i, a in enumerate(self.letters)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def step(self, q: int, a: Letter) -> int:
        return self.delta[q][self.letter_index(a)]

    def run(self, word: Iterable[Letter], q: int | None = None) -> int:
        q = self.initial if q is None else q
        for a in word:
            q = self.step(q, a)
        return q


# ---------------------------------------------------------------- progression

# An obligation is (strong, ψ): ψ must hold at the next position, which must
# exist when strong. A clause is a frozenset of obligations; a state a set of
# clauses read as a disjunction.

Clause = frozenset
State = frozenset

TRUE: State = frozenset({frozenset()})
FALSE: State = frozenset()


def _normal_clause(c: Iterable[tuple[bool, Formula]]) -> Clause:
    c = frozenset(c)
    # a strong obligation guarantees the next position exists
    if any(s for s, _ in c):
        c = frozenset((True, f) for _, f in c)
    return c


def _absorb(clauses: Iterable[Clause]) -> State:
    cs = sorted(set(clauses), key=len)
    kept: list[Clause] = []
    for c in cs:
        if not any(k <= c for k in kept):
            kept.append(c)
    return frozenset(kept)


def _or(x: State, y: State) -> State:
    return _absorb(x | y)


def _and(x: State, y: State) -> State:
    return _absorb(_normal_clause(c | d) for c in x for d in y)


def _obligation(strong: bool, f: Formula) -> State:
    return frozenset({frozenset({(strong, f)})})


def _progress(f: Formula, a: Letter) -> State:
    if isinstance(f, Lit):
        return TRUE if (f.prop in a) == f.positive else FALSE
    if isinstance(f, And):
        return _and(_progress(f.left, a), _progress(f.right, a))
    if isinstance(f, Or):
        return _or(_progress(f.left, a), _progress(f.right, a))
    if isinstance(f, X):
        return _obligation(True, f.child)
    if isinstance(f, WX):
        return _obligation(False, f.child)
    if isinstance(f, F):
        return _or(_progress(f.child, a), _obligation(True, f))
    if isinstance(f, G):
        return _and(_progress(f.child, a), _obligation(False, f))
    raise AutomatonError(f"unsupported node {f}")


def _advance(s: State, a: Letter) -> State:
    out = FALSE
    for clause in s:
        part = TRUE
        for _, f in clause:
            part = _and(part, _progress(f, a))
            if not part:
                break
        out = _or(out, part)
    return out


def _accepts_here(s: State) -> bool:
    # the word ends: strong obligations fail, weak ones hold
    return any(all(not strong for strong, _ in c) for c in s)


def dfa_from_formula(f: Formula, ap: Iterable[str] | None = None) -> Dfa:
    """DFA for the nonempty finite words satisfying ``f`` at position 0.

    ``f`` may use X, wX, F, G and the Boolean connectives. The initial state
    is the obligation "f holds at the first position", so it never accepts.
    """
    bad = operators(f) - {"X", "wX", "F", "G"}
    if bad:
        raise AutomatonError(f"operators outside X, wX, F, G: {', '.join(sorted(bad))}")
    names = sorted(props(f) if ap is None else set(ap))
    if len(names) > MAX_AP:
        raise AutomatonError(f"at most {MAX_AP} propositions are supported")
    letters = tuple(all_letters(names))
    start = _obligation(True, f)
    index = {start: 0}
    order = [start]
    rows: list[tuple[int, ...]] = []
    i = 0
    while i < len(order):
        s = order[i]
        row = []
        for a in letters:
            t = _advance(s, a)
            if t not in index:
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        rows.append(tuple(row))
        i += 1
    accepting = frozenset(k for k, s in enumerate(order) if _accepts_here(s))
    return Dfa(letters, tuple(rows), 0, accepting)


def dfa_accepts(d: Dfa, word: Trace | Sequence[Letter]) -> bool:
    return d.run(word) in d.accepting


# ---------------------------------------------------------------- closures


def is_trap_closed(d: Dfa) -> bool:
    return all(all(t == q for t in d.delta[q]) for q in d.accepting)


def trap_close(d: Dfa) -> Dfa:
    """Accepting states become self-loops: recognizes L·Σ* (and L·Σ^ω as a DBA)."""
    rows = tuple(
        tuple(q for _ in d.letters) if q in d.accepting else row
        for q, row in enumerate(d.delta)
    )
    return Dfa(d.letters, rows, d.initial, d.accepting)


def gf_close(d: Dfa) -> Dfa:
    """Accepting states take the initial state's transitions.

    Read as a DBA, a trap-closed automaton for a cosafety language K·Σ^ω
    becomes one for words with infinitely many K-segments.
    """
    if not is_trap_closed(d):
        raise AutomatonError("gf_close needs accepting states to be traps")
    init_row = d.delta[d.initial]
    rows = tuple(init_row if q in d.accepting else row for q, row in enumerate(d.delta))
    return Dfa(d.letters, rows, d.initial, d.accepting)


def prefix_chain(d: Dfa, j: int) -> Dfa:
    """Prepend j fresh states that skip one letter each: Σ^j · L."""
    if j < 0:
        raise AutomatonError("chain length must be nonnegative")
    if j == 0:
        return d
    n = d.states
    chain = []
    for k in range(j):
        nxt = n + k + 1 if k + 1 < j else d.initial
        chain.append(tuple(nxt for _ in d.letters))
    return Dfa(d.letters, d.delta + tuple(chain), n, d.accepting)


def lasso_accepts(d: Dfa, u: Sequence[Letter], v: Sequence[Letter]) -> bool:
    """Büchi acceptance of u·v^ω: some accepting state recurs on the final cycle."""
    if not v:
        raise AutomatonError("lasso period must be nonempty")
    q = d.run(u)
    seen: dict[int, int] = {}
    visits: list[set[int]] = []
    # at most |states| rounds of v before a round-start state repeats
    while q not in seen:
        seen[q] = len(visits)
        hit = set()
        for a in v:
            q = d.step(q, a)
            hit.add(q)
        visits.append(hit)
    cycle = set().union(*visits[seen[q]:])
    return bool(cycle & d.accepting)


# ---------------------------------------------------------------- JSON


def to_dict(d: Dfa) -> dict:
    return {
        "letters": [format_letter(a) for a in d.letters],
        "states": d.states,
        "initial": d.initial,
        "accepting": sorted(d.accepting),
        "delta": [list(row) for row in d.delta],
    }


def from_dict(data: dict) -> Dfa:
    try:
        letters = tuple(
            frozenset() if s == "-" else frozenset(x.strip() for x in s.split(","))
            for s in data["letters"]
        )
        delta = tuple(tuple(int(q) for q in row) for row in data["delta"])
        if int(data["states"]) != len(delta):
            raise AutomatonError("state count does not match the table")
        return Dfa(letters, delta, int(data["initial"]), frozenset(int(q) for q in data["accepting"]))
    except (KeyError, TypeError, AttributeError) as e:
        raise AutomatonError(f"malformed automaton: {e}") from None


def save_dfa(path: str | Path, d: Dfa) -> None:
    Path(path).write_text(json.dumps(to_dict(d), indent=1) + "\n")


def load_dfa(path: str | Path) -> Dfa:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise AutomatonError(f"not JSON: {e}") from None
    return from_dict(data)
