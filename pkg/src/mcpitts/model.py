"""Domain types: hypercube points, threshold units, McCulloch-Pitts systems,
dichotomies and traces.

All weights are exact rationals (:class:`fractions.Fraction`). On the finite
domain {0,1}^n every real-weighted threshold function is realized by rational
weights, so nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Iterator, Sequence


class DimensionError(ValueError):
    """Raised when widths or arities disagree."""


class BitVec(tuple):
    """An immutable point of {0,1}^n.

    Index 0 of the tuple is the *first bit*, printed leftmost. Ordering is
    the tuple ordering, i.e. lexicographic by bits.
    """

    __slots__ = ()

    def __new__(cls, bits: Iterable[int]) -> "BitVec":
        self = super().__new__(cls, (int(b) for b in bits))
        if not self:
            raise DimensionError("a BitVec needs width >= 1")
        for b in self:
            if b not in (0, 1):
                raise ValueError(f"bits must be 0 or 1, got {b!r}")
        return self

    @classmethod
    def from_str(cls, text: str) -> "BitVec":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(c) for c in text)

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitVec":
        """First bit is the most significant bit of ``value``."""
        if not 0 <= value < (1 << width):
            raise ValueError(f"{value} does not fit in {width} bits")
        return cls((value >> (width - 1 - j)) & 1 for j in range(width))

    @property
    def width(self) -> int:
        return len(self)

    def to_int(self) -> int:
        v = 0
        for b in self:
            v = (v << 1) | b
        return v

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self)

    def __repr__(self) -> str:
        return f"BitVec('{self}')"


@dataclass(frozen=True)
class ThresholdUnit:
    """f(x) = H(sum_j w_j x_j - theta) with H(0) = 1."""

    weights: tuple[Fraction, ...]
    theta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        object.__setattr__(self, "theta", Fraction(self.theta))
        if not self.weights:
            raise DimensionError("a threshold unit needs at least one weight")

    @property
    def arity(self) -> int:
        return len(self.weights)

    @cached_property
    def integer_form(self) -> tuple[tuple[int, ...], int]:
        """Integer weights and threshold with the same outputs (positive rescaling)."""
        scale = lcm(*(w.denominator for w in self.weights), self.theta.denominator)
        ints = tuple(int(w * scale) for w in self.weights)
        return ints, int(self.theta * scale)

    def __call__(self, x: Sequence[int]) -> int:
        return evaluate_unit(self, x)


def evaluate_unit(u: ThresholdUnit, x: Sequence[int]) -> int:
    """Return 1 iff sum_j w_j x_j >= theta, compared exactly."""
    if len(x) != u.arity:
        raise DimensionError(f"unit has arity {u.arity}, point has width {len(x)}")
    w, theta = u.integer_form
    return int(sum(wj for wj, xj in zip(w, x) if xj) >= theta)


@dataclass(frozen=True)
class MPSystem:
    """A McCulloch-Pitts dynamical system Phi(x) = (f_1(x), ..., f_n(x))."""

    units: tuple[ThresholdUnit, ...]

    def __post_init__(self):
        units = tuple(self.units)
        object.__setattr__(self, "units", units)
        if not units:
            raise DimensionError("a system needs at least one unit")
        n = len(units)
        for j, u in enumerate(units):
            if u.arity != n:
                raise DimensionError(f"unit {j + 1} has arity {u.arity}, system has dimension {n}")

    @property
    def n(self) -> int:
        return len(self.units)

    @classmethod
    def from_integers(cls, weights: Sequence[Sequence[int]], thetas: Sequence[int]) -> "MPSystem":
        return cls(tuple(ThresholdUnit(tuple(w), t) for w, t in zip(weights, thetas, strict=True)))

    @cached_property
    def _rows(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        return tuple(u.integer_form for u in self.units)

    def step(self, x: Sequence[int]) -> tuple[int, ...]:
        """Phi on a plain bit tuple; no validation, used by the dynamics hot loops."""
        return tuple(
            int(sum(wj for wj, xj in zip(w, x) if xj) >= t) for w, t in self._rows
        )

    def __call__(self, x: BitVec) -> BitVec:
        return apply_system(self, x)


def apply_system(phi: MPSystem, x: Sequence[int]) -> BitVec:
    if len(x) != phi.n:
        raise DimensionError(f"system has dimension {phi.n}, point has width {len(x)}")
    return BitVec(phi.step(x))


def identity_system(n: int) -> MPSystem:
    """Unit j copies bit j (w = e_j, theta = 1)."""
    return MPSystem.from_integers([[int(i == j) for i in range(n)] for j in range(n)], [1] * n)


def constant_system(n: int, value: int = 1) -> MPSystem:
    """All-zero weights; theta = -1 gives all-ones, theta = 1 gives all-zeros."""
    return MPSystem.from_integers([[0] * n for _ in range(n)], [-1 if value else 1] * n)


def cyclic_shift_system(n: int) -> MPSystem:
    """Unit j copies bit j-1 (mod n), so 100 -> 010 -> 001."""
    return MPSystem.from_integers(
        [[int(i == (j - 1) % n) for i in range(n)] for j in range(n)], [1] * n
    )


class PointConflict(ValueError):
    """A point was labelled both positive and negative."""

    def __init__(self, point: BitVec):
        super().__init__(f"point {point} appears in both X+ and X-")
        self.point = point


@dataclass(frozen=True)
class Dichotomy:
    """An ordered pair (X+, X-) of disjoint point sets of one width.

    Build through :meth:`from_points`, which reports a point labelled both
    ways by raising :class:`PointConflict`.
    """

    positives: frozenset[BitVec]
    negatives: frozenset[BitVec]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("width must be >= 1")
        for p in self.positives | self.negatives:
            if len(p) != self.n:
                raise DimensionError(f"point {p} does not have width {self.n}")
        common = self.positives & self.negatives
        if common:
            raise PointConflict(min(common))

    @classmethod
    def from_points(
        cls,
        positives: Iterable[Sequence[int]],
        negatives: Iterable[Sequence[int]],
        n: int | None = None,
    ) -> "Dichotomy":
        pos = frozenset(p if isinstance(p, BitVec) else BitVec(p) for p in positives)
        neg = frozenset(p if isinstance(p, BitVec) else BitVec(p) for p in negatives)
        if n is None:
            widths = {len(p) for p in pos | neg}
            if len(widths) > 1:
                raise DimensionError(f"mixed widths {sorted(widths)}")
            if not widths:
                raise DimensionError("cannot infer the width of an empty dichotomy")
            n = widths.pop()
        return cls(pos, neg, n)

    @classmethod
    def from_labels(cls, points: Sequence[Sequence[int]], labels: Sequence[int], n: int | None = None) -> "Dichotomy":
        pos = [p for p, lab in zip(points, labels, strict=True) if lab]
        neg = [p for p, lab in zip(points, labels, strict=True) if not lab]
        if n is None and points:
            n = len(points[0])
        return cls.from_points(pos, neg, n)

    def points(self) -> list[BitVec]:
        return sorted(self.positives | self.negatives)

    def swapped(self) -> "Dichotomy":
        return Dichotomy(self.negatives, self.positives, self.n)

    def __len__(self) -> int:
        return len(self.positives) + len(self.negatives)


@dataclass(frozen=True)
class Trace:
    """A sequence of m >= 1 pairs (x^i, y^i) of n-bit vectors."""

    pairs: tuple[tuple[BitVec, BitVec], ...]
    n: int = field(init=False)

    def __post_init__(self):
        pairs = tuple(
            (x if isinstance(x, BitVec) else BitVec(x), y if isinstance(y, BitVec) else BitVec(y))
            for x, y in self.pairs
        )
        if not pairs:
            raise ValueError("a trace needs at least one pair")
        n = len(pairs[0][0])
        for i, (x, y) in enumerate(pairs):
            if len(x) != n or len(y) != n:
                raise DimensionError(f"pair {i + 1} has widths ({len(x)}, {len(y)}), expected {n}")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "n", n)

    @property
    def m(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[BitVec, BitVec]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)
