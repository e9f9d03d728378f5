"""Finite traces, suffix views, trace sets and the suffix operations on them."""
from __future__ import annotations

import itertools
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

Letter = frozenset  # frozenset[str]

EMPTY_LETTER: Letter = frozenset()


def letter(*names: str) -> Letter:
    return frozenset(names)


def letter_key(a: Letter) -> tuple[str, ...]:
    return tuple(sorted(a))


def format_letter(a: Letter) -> str:
    return ",".join(sorted(a)) if a else "-"


class _Base:
    """Shared storage for a trace and all of its suffixes."""

    __slots__ = ("letters", "hashes", "keys")

    def __init__(self, letters: tuple[Letter, ...]):
        self.letters = letters
        n = len(letters)
        hashes = [0] * (n + 1)
        h = 0x345678
        for i in range(n - 1, -1, -1):
            h = hash((letters[i], h))
            hashes[i] = h
        self.hashes = hashes
        self.keys = tuple(letter_key(a) for a in letters)


class Trace:
    """A nonempty finite word over letters (sets of propositions).

    ``t.suffix(i)`` is a view sharing storage with ``t``; equality, hashing and
    ordering only look at content, so a suffix equals a freshly built trace
    with the same letters.
    """

    __slots__ = ("_base", "_off", "_key")

    def __init__(self, letters: Iterable[Iterable[str]]):
        lets = tuple(frozenset(a) for a in letters)
        if not lets:
            raise ValueError("traces must be nonempty")
        self._base = _Base(lets)
        self._off = 0
        self._key = None

    @classmethod
    def _view(cls, base: _Base, off: int) -> "Trace":
        t = cls.__new__(cls)
        t._base = base
        t._off = off
        t._key = None
        return t

    @classmethod
    def parse(cls, line: str) -> "Trace":
        line = line.strip()
        if not line:
            raise ValueError("empty trace")
        lets = []
        for part in line.split(";"):
            part = part.strip()
            if part == "-":
                lets.append(())
                continue
            names = [p.strip() for p in part.split(",")]
            if not part or any(not _is_prop(n) for n in names):
                raise ValueError(f"bad letter {part!r}")
            lets.append(names)
        return cls(lets)

    def __len__(self) -> int:
        return len(self._base.letters) - self._off

    def __getitem__(self, i: int) -> Letter:
        n = len(self)
        if i < 0:
            i += n
        if not 0 <= i < n:
            raise IndexError("position out of range")
        return self._base.letters[self._off + i]

    def __iter__(self) -> Iterator[Letter]:
        return iter(self._base.letters[self._off:])

    @property
    def letters(self) -> tuple[Letter, ...]:
        return self._base.letters[self._off:]

    @property
    def offset(self) -> int:
        """Offset of this view into its underlying storage."""
        return self._off

    def suffix(self, i: int) -> "Trace":
        if not 0 <= i < len(self):
            raise IndexError(f"suffix offset {i} out of range for length {len(self)}")
        if i == 0:
            return self
        return Trace._view(self._base, self._off + i)

    def suffixes(self) -> Iterator["Trace"]:
        for i in range(len(self)):
            yield self.suffix(i)

    def root(self) -> "Trace":
        """The full trace this view was cut from."""
        return self if self._off == 0 else Trace._view(self._base, 0)

    def shares_storage(self, other: "Trace") -> bool:
        return self._base is other._base

    def sort_key(self) -> tuple[tuple[str, ...], ...]:
        if self._key is None:
            self._key = self._base.keys[self._off:]
        return self._key

    def __hash__(self) -> int:
        return self._base.hashes[self._off]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        if self._base is other._base:
            return self._off == other._off
        if hash(self) != hash(other) or len(self) != len(other):
            return False
        return self.sort_key() == other.sort_key()

    def __lt__(self, other: "Trace") -> bool:
        return self.sort_key() < other.sort_key()

    def __add__(self, other: "Trace") -> "Trace":
        return Trace(self.letters + other.letters)

    def __str__(self) -> str:
        return ";".join(format_letter(a) for a in self)

    def __repr__(self) -> str:
        return f"Trace({str(self)!r})"

    def props(self) -> frozenset[str]:
        return frozenset().union(*self)

    def is_suffix_of(self, other: "Trace") -> bool:
        k = len(other) - len(self)
        return k >= 0 and other.suffix(k) == self

    def is_prefix_of(self, other: "Trace") -> bool:
        return len(self) <= len(other) and other.letters[: len(self)] == self.letters


def _is_prop(name: str) -> bool:
    from .formula import is_proposition_name

    return is_proposition_name(name)


def word(text: str, alphabet: Mapping[str, Iterable[str]]) -> Trace:
    """Build a trace from a string of symbols, e.g. ``word("abaa", {"a": {"p"}, "b": ()})``."""
    return Trace(alphabet[ch] for ch in text)


class TraceSet(frozenset):
    """A finite set of traces; ``ordered()`` gives the canonical order."""

    __slots__ = ()

    def ordered(self) -> tuple[Trace, ...]:
        return tuple(sorted(self, key=Trace.sort_key))

    def props(self) -> frozenset[str]:
        return frozenset().union(*(t.props() for t in self))

    def __repr__(self) -> str:
        return "{" + ", ".join(str(t) for t in self.ordered()) + "}"


def trace_set(traces: Iterable[Trace] = ()) -> TraceSet:
    return TraceSet(traces)


def suffix_x(ts: Iterable[Trace]) -> TraceSet:
    """``{σ[1:] : |σ| ≥ 2}``."""
    return TraceSet(t.suffix(1) for t in ts if len(t) >= 2)


def suffix_g(ts: Iterable[Trace]) -> TraceSet:
    """All suffixes of all members."""
    return TraceSet(s for t in ts for s in t.suffixes())


FuturePoint = Mapping[Trace, int]


def is_future_point(ts: Iterable[Trace], f: FuturePoint) -> bool:
    members = set(ts)
    return set(f) == members and all(0 <= f[t] < len(t) for t in members)


def apply_future_point(ts: Iterable[Trace], f: FuturePoint) -> TraceSet:
    out = []
    for t in ts:
        if t not in f:
            raise ValueError(f"future point undefined on {t}")
        j = f[t]
        if not 0 <= j < len(t):
            raise ValueError(f"future point {j} out of range for {t}")
        out.append(t.suffix(j))
    return TraceSet(out)


def future_points(ts: Iterable[Trace]) -> Iterator[dict[Trace, int]]:
    """Enumerate all future points in lexicographic order over the canonical member order.

    The empty set has exactly one (empty) future point.
    """
    members = TraceSet(ts).ordered()
    for combo in itertools.product(*(range(len(t)) for t in members)):
        yield dict(zip(members, combo))


def reverse_trace(t: Trace) -> Trace:
    """``σ⁻[i] = σ[|σ|-1-i]``."""
    return Trace(reversed(t.letters))


def reverse_set(ts: Iterable[Trace]) -> TraceSet:
    return TraceSet(reverse_trace(t) for t in ts)


# ---------------------------------------------------------------- files


class TraceFileError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_traces(text: str) -> TraceSet:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(Trace.parse(line))
        except ValueError as e:
            raise TraceFileError(str(e), lineno) from None
    return TraceSet(out)


def format_traces(ts: Iterable[Trace]) -> str:
    return "".join(str(t) + "\n" for t in TraceSet(ts).ordered())


def load_traces(path: str | Path) -> TraceSet:
    return parse_traces(Path(path).read_text())


def save_traces(path: str | Path, ts: Iterable[Trace]) -> None:
    Path(path).write_text(format_traces(ts))


def lasso_letters(text: str) -> tuple[Letter, ...]:
    """Parse a possibly empty ``;``-separated letter list (used for lasso prefixes)."""
    text = text.strip()
    if not text:
        return ()
    return Trace.parse(text).letters


def all_traces(alphabet: Sequence[Letter], max_len: int) -> Iterator[Trace]:
    for n in range(1, max_len + 1):
        for combo in itertools.product(alphabet, repeat=n):
            yield Trace(combo)


def all_letters(ap: Iterable[str]) -> list[Letter]:
    names = sorted(ap)
    return [
        frozenset(n for n, bit in zip(names, bits) if bit)
        for bits in itertools.product((0, 1), repeat=len(names))
    ]
