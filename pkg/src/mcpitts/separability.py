"""Exact strict linear separability of dichotomies, with certificates.

A dichotomy (X+, X-) is linearly separable when some y in Q^n and offset c
satisfy ``x.y > c`` on X+ and ``x.y < c`` on X-. Because the point sets are
finite, that is equivalent to the margin-one system

    s_x * (x.y - c) >= 1        (s_x = +1 on X+, -1 on X-)

and by Farkas' lemma exactly one of the following holds:

* the margin system is feasible (a :class:`Separator` exists), or
* there are u >= 0, sum(u) = 1, with sum_x s_x u_x (x, -1) = 0, which after
  doubling is a common point of conv(X+) and conv(X-) (a :class:`HullWitness`).

We run an exact phase-one simplex on the second system, which has only
n + 2 rows. A feasible basis is the hull witness; an infeasible one leaves
simplex multipliers that are, up to sign, a strict separator.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import gcd
from typing import Mapping

import numpy as np

from .model import BitVec, Dichotomy, DimensionError
from .simplex import phase_one


class Verdict(enum.Enum):
    SEPARABLE = "separable"
    INSEPARABLE = "inseparable"


@dataclass(frozen=True)
class Separator:
    """Normal vector ``y`` and offset; positives have y.x > offset, negatives y.x < offset."""

    y: tuple[Fraction, ...]
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(Fraction(v) for v in self.y))
        object.__setattr__(self, "offset", Fraction(self.offset))

    def value(self, x) -> Fraction:
        return sum((yj for yj, xj in zip(self.y, x) if xj), Fraction(0))

    def to_dict(self) -> dict:
        return {"y": [_fmt(v) for v in self.y], "offset": _fmt(self.offset)}


@dataclass(frozen=True)
class HullWitness:
    """Convex weights on X+ (``lam``) and X- (``mu``) with a common barycentre."""

    lam: Mapping[BitVec, Fraction]
    mu: Mapping[BitVec, Fraction]

    def common_point(self) -> tuple[Fraction, ...]:
        return _combination(self.lam)

    def to_dict(self) -> dict:
        return {
            "lambda": {str(p): _fmt(v) for p, v in sorted(self.lam.items())},
            "mu": {str(p): _fmt(v) for p, v in sorted(self.mu.items())},
            "common_point": [_fmt(v) for v in self.common_point()],
        }


@dataclass(frozen=True)
class SeparabilityResult:
    verdict: Verdict
    witness: Separator | HullWitness

    @property
    def separable(self) -> bool:
        return self.verdict is Verdict.SEPARABLE

    def to_dict(self) -> dict:
        kind = "separator" if self.separable else "hull_witness"
        return {"verdict": self.verdict.value, kind: self.witness.to_dict()}


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _combination(weights: Mapping[BitVec, Fraction]) -> tuple[Fraction, ...]:
    if not weights:
        return ()
    n = len(next(iter(weights)))
    acc = [Fraction(0)] * n
    for p, c in weights.items():
        for j, b in enumerate(p):
            if b:
                acc[j] += c
    return tuple(acc)


def _primitive(values: list[Fraction]) -> list[Fraction]:
    """Scale a rational vector by a positive factor to coprime integers."""
    den = reduce(lambda a, v: a * v.denominator // gcd(a, v.denominator), values, 1)
    ints = [int(v * den) for v in values]
    g = reduce(gcd, ints, 0)
    if g > 1:
        ints = [v // g for v in ints]
    return [Fraction(v) for v in ints]


def _empty_side_separator(d: Dichotomy) -> Separator:
    zero = (Fraction(0),) * d.n
    if d.positives:
        return Separator(zero, Fraction(-1))  # every point has value 0 > -1
    if d.negatives:
        return Separator(zero, Fraction(1))
    # nothing to separate; the inequalities are vacuous
    return Separator(zero, Fraction(0))


def decide_separable(d: Dichotomy) -> SeparabilityResult:
    """Decide strict separability of ``d`` exactly and return a certificate."""
    if not d.positives or not d.negatives:
        return SeparabilityResult(Verdict.SEPARABLE, _empty_side_separator(d))

    pts = sorted(d.positives) + sorted(d.negatives)
    signs = [1] * len(d.positives) + [-1] * len(d.negatives)
    n = d.n
    # columns are points; rows: n coordinates, the offset row, normalisation
    B = [[s * p[j] for p, s in zip(pts, signs)] for j in range(n)]
    B.append([-s for s in signs])
    B.append([1] * len(pts))
    b = [0] * (n + 1) + [1]
    res = phase_one(B, b)

    if res.feasible:
        lam = {p: 2 * u for p, u, s in zip(pts, res.primal, signs) if s > 0 and u}
        mu = {p: 2 * u for p, u, s in zip(pts, res.primal, signs) if s < 0 and u}
        w = HullWitness(dict(sorted(lam.items())), dict(sorted(mu.items())))
        result = SeparabilityResult(Verdict.INSEPARABLE, w)
    else:
        z = _primitive([-v for v in res.farkas[: n + 1]])
        result = SeparabilityResult(Verdict.SEPARABLE, Separator(tuple(z[:n]), z[n]))
    if not verify_result(d, result):
        raise AssertionError("certificate failed its own check")  # pragma: no cover
    return result


def verify_separator(d: Dichotomy, s: Separator) -> bool:
    """True iff ``s`` strictly separates ``d``, checked in exact arithmetic."""
    if len(s.y) != d.n:
        raise DimensionError(f"separator has {len(s.y)} weights, dichotomy has width {d.n}")
    # common denominator, then integer arithmetic only
    scale = reduce(lambda acc, v: acc * v.denominator // gcd(acc, v.denominator), (*s.y, s.offset), 1)
    y = [int(v * scale) for v in s.y]
    c = int(s.offset * scale)

    def value(x):
        return sum(yj for yj, xj in zip(y, x) if xj)

    return all(value(x) > c for x in d.positives) and all(value(x) < c for x in d.negatives)


def verify_hull_witness(d: Dichotomy, w: HullWitness) -> bool:
    """True iff ``w`` exhibits a common point of conv(X+) and conv(X-).

    Points missing from the coefficient maps count as weight zero; a
    coefficient on a point outside its side invalidates the witness.
    """
    if not set(w.lam) <= d.positives or not set(w.mu) <= d.negatives:
        return False
    lam = {p: Fraction(v) for p, v in w.lam.items()}
    mu = {p: Fraction(v) for p, v in w.mu.items()}
    if any(v < 0 for v in lam.values()) or any(v < 0 for v in mu.values()):
        return False
    if sum(lam.values()) != 1 or sum(mu.values()) != 1:
        return False
    return _combination(lam) == _combination(mu)


def verify_result(d: Dichotomy, r: SeparabilityResult) -> bool:
    if r.verdict is Verdict.SEPARABLE:
        return isinstance(r.witness, Separator) and verify_separator(d, r.witness)
    return isinstance(r.witness, HullWitness) and verify_hull_witness(d, r.witness)


ORACLE_MAX_WIDTH = 5
ORACLE_MAX_POINTS = 32


class OracleGuardError(ValueError):
    pass


_CHUNK = 1 << 16


@lru_cache(maxsize=64)
def _realizable_labelings(points: tuple[BitVec, ...], bound: int) -> frozenset[int]:
    """Bit masks (bit i set = point i positive) realized by some integer
    vector in [-bound, bound]^(n+1) with no point on the hyperplane."""
    n = len(points[0])
    P = np.array(points, dtype=np.int64)
    weights = np.int64(1) << np.arange(len(points), dtype=np.int64)
    side = 2 * bound + 1
    total = side ** (n + 1)
    masks = set()
    for lo in range(0, total, _CHUNK):
        idx = np.arange(lo, min(total, lo + _CHUNK), dtype=np.int64)
        digits = np.empty((idx.size, n + 1), dtype=np.int64)
        for k in range(n, -1, -1):
            digits[:, k] = idx % side - bound
            idx //= side
        vals = digits[:, :n] @ P.T - digits[:, n:]
        strict = np.all(vals != 0, axis=1)
        masks.update(np.unique(((vals[strict] > 0) * weights).sum(axis=1)).tolist())
    return frozenset(masks)


def oracle_separable(d: Dichotomy, bound: int) -> Verdict:
    """Brute-force separability over integer vectors in [-bound, bound]^(n+1).

    Shares nothing with the simplex path. A SEPARABLE answer is always
    right; INSEPARABLE is only conclusive when ``bound`` is large enough
    for the width: every dichotomy of {0,1}^3 is realized at bound 5 and
    every dichotomy of {0,1}^4 at bound 9, but 3-input AND already needs
    an offset of 5.
    """
    if d.n > ORACLE_MAX_WIDTH or len(d) > ORACLE_MAX_POINTS:
        raise OracleGuardError(
            f"oracle limited to width <= {ORACLE_MAX_WIDTH} and <= {ORACLE_MAX_POINTS} points"
        )
    if bound < 0:
        raise ValueError("bound must be >= 0")
    if not len(d):
        return Verdict.SEPARABLE
    pts = tuple(d.points())
    mask = sum(1 << i for i, p in enumerate(pts) if p in d.positives)
    found = mask in _realizable_labelings(pts, bound)
    return Verdict.SEPARABLE if found else Verdict.INSEPARABLE
