"""How rare separable dichotomies are: exact bounds, exact counts and
Monte-Carlo estimates."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import rng as _rng
from .model import BitVec, Dichotomy
from .separability import decide_separable

BRUTE_FORCE_LIMIT = 20
Z95 = 1.959963984540054  # 97.5% normal quantile


def paper_bound(m: int, n: int) -> int:
    """2 * sum_{i=0}^{n} C(m-1, i): the maximum number of separable
    dichotomies of m points in R^n (Cover/Winder)."""
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    return 2 * sum(comb(m - 1, i) for i in range(n + 1))


def sauer_shelah_bound(m: int, n: int) -> int:
    """2 * sum_{i=0}^{n+1} C(m, i), from VC dimension n + 1 of half-spaces."""
    if m < 0 or n < 0:
        raise ValueError("need m >= 0 and n >= 0")
    return 2 * sum(comb(m, i) for i in range(n + 2))


def probability_bound(m: int, n: int) -> Fraction:
    """Upper bound on P(uniform dichotomy of m points is separable), clamped at 1."""
    return min(Fraction(1), Fraction(paper_bound(m, n), 2**m))


def distinct_probability(m: int, n: int) -> Fraction:
    """P(m uniform draws from {0,1}^n are pairwise distinct), exactly."""
    if m < 0 or n < 0:
        raise ValueError("need m >= 0 and n >= 0")
    size = 2**n
    if m > size:
        return Fraction(0)
    p = Fraction(1)
    for i in range(m):
        p *= Fraction(size - i, size)
    return p


def brute_force_limit() -> int:
    return int(os.environ.get("MP_MAX_BRUTE", BRUTE_FORCE_LIMIT))


def count_separable(points: Iterable[Sequence[int]], limit: int | None = None) -> int:
    """Exact number of ordered separable dichotomies of a point set.

    Costs 2^(|X|-1) exact separability tests: a labelling is separable iff
    its complement is, so only labellings with the first point negative are
    tested and the result doubled. Refuses more than ``limit`` points
    (default 20, or ``MP_MAX_BRUTE``).
    """
    pts = sorted({p if isinstance(p, BitVec) else BitVec(p) for p in points})
    limit = brute_force_limit() if limit is None else limit
    if len(pts) > limit:
        raise ValueError(f"{len(pts)} points exceeds the brute-force guard of {limit}")
    if not pts:
        return 1
    n = len(pts[0])
    first, rest = pts[0], pts[1:]
    count = 0
    for labels in product((0, 1), repeat=len(rest)):
        pos = [p for p, lab in zip(rest, labels) if lab]
        neg = [first] + [p for p, lab in zip(rest, labels) if not lab]
        if decide_separable(Dichotomy.from_points(pos, neg, n)).separable:
            count += 1
    return 2 * count


def cube(n: int) -> list[BitVec]:
    return [BitVec(b) for b in product((0, 1), repeat=n)]


def wilson_interval(hits: int, trials: int, z: float = Z95) -> tuple[Fraction, Fraction]:
    """Wilson score interval, rounded outward to multiples of 1e-9."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = hits / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    scale = 10**9
    lo = Fraction(math.floor((centre - half) * scale), scale)
    hi = Fraction(math.ceil((centre + half) * scale), scale)
    est = Fraction(hits, trials)
    return max(Fraction(0), min(lo, est)), min(Fraction(1), max(hi, est))


@dataclass(frozen=True)
class EstimateReport:
    n: int
    m: int
    trials: int
    hits: int
    seed: int
    distinct_only: bool = False
    full_cube: bool = False

    @property
    def point_estimate(self) -> Fraction:
        return Fraction(self.hits, self.trials)

    @property
    def confidence_interval(self) -> tuple[Fraction, Fraction]:
        return wilson_interval(self.hits, self.trials)

    CSV_COLUMNS = ("n", "m", "trials", "hits", "estimate", "ci_low", "ci_high", "seed")

    def to_row(self) -> list[str]:
        lo, hi = self.confidence_interval
        return [
            str(self.n), str(self.m), str(self.trials), str(self.hits),
            _fmt(self.point_estimate), _fmt(lo), _fmt(hi), str(self.seed),
        ]

    def to_dict(self) -> dict:
        d = dict(zip(self.CSV_COLUMNS, self.to_row()))
        for k in ("n", "m", "trials", "hits", "seed"):
            d[k] = int(d[k])
        d["distinct_only"] = self.distinct_only
        d["full_cube"] = self.full_cube
        return d


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _trial(n: int, m: int, seed: int, k: int, distinct_only: bool, full_cube: bool) -> bool:
    g = _rng.generator(seed, _rng.TRIAL_STREAM, k)
    if full_cube:
        pts = np.array(list(product((0, 1), repeat=n)), dtype=np.uint8)
    elif distinct_only:
        if m > 2**n:
            raise ValueError(f"cannot draw {m} distinct points from {{0,1}}^{n}")
        while True:
            pts = g.integers(0, 2, size=(m, n), dtype=np.uint8)
            if len(np.unique(pts, axis=0)) == m:
                break
    else:
        pts = g.integers(0, 2, size=(m, n), dtype=np.uint8)
    # one fair label per distinct point
    pts = np.unique(pts, axis=0)
    labels = g.integers(0, 2, size=len(pts), dtype=np.uint8)
    pos, neg = set(), set()
    for row, lab in zip(pts.tolist(), labels.tolist()):
        (pos if lab else neg).add(BitVec(row))
    return decide_separable(Dichotomy(frozenset(pos), frozenset(neg), n)).separable


def _trial_args(args):
    return _trial(*args)


def estimate_separability_probability(
    n: int,
    m: int,
    trials: int,
    seed: int,
    distinct_only: bool = False,
    full_cube: bool = False,
    executor=None,
) -> EstimateReport:
    """Fraction of random labelled point sets that are linearly separable.

    Each trial draws m points uniformly from {0,1}^n (``distinct_only``
    redraws until they are pairwise distinct; ``full_cube`` uses all 2^n
    points instead and ignores m), collapses repeated points, and gives
    every distinct point a fair label.
    Trial k uses its own derived seed, so the result does not depend on
    ``executor`` or on the order in which trials finish.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if full_cube:
        m = 2**n
    if m < 1:
        raise ValueError("m must be >= 1")
    seed = _rng.check_seed(seed)
    jobs = [(n, m, seed, k, distinct_only, full_cube) for k in range(trials)]
    mapper = executor.map if executor is not None else map
    hits = sum(1 for ok in mapper(_trial_args, jobs) if ok)
    return EstimateReport(n, m, trials, hits, seed, distinct_only, full_cube)


def phase_transition_sweep(
    n: int,
    ratios: Sequence[float],
    trials: int,
    seed: int,
    distinct_only: bool = False,
    executor=None,
) -> list[EstimateReport]:
    """One estimate per m = ceil(ratio * n), all with the same master seed."""
    return [
        estimate_separability_probability(
            n, math.ceil(Fraction(str(r)) * n), trials, seed, distinct_only=distinct_only, executor=executor
        )
        for r in ratios
    ]
