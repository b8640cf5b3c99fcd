"""Telling McCulloch-Pitts traces from truly random function traces.

Given pairs (x^i, y^i), label each x^i by the first bit of y^i. If the
labelled set is linearly separable the trace is consistent with some
McCulloch-Pitts system (as far as the first neuron can tell) and we answer
``McCulloch-Pitts``; otherwise no threshold function, hence no system, could
have produced it. The refined variant asks the same question of every bit
position.
"""

from __future__ import annotations

import enum
from concurrent.futures import Executor
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .model import BitVec, Dichotomy, MPSystem, PointConflict, Trace
from .separability import HullWitness, Separator, decide_separable


class Label(enum.Enum):
    MCCULLOCH_PITTS = "McCulloch-Pitts"
    NOT_MCCULLOCH_PITTS = "not McCulloch-Pitts"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Verdict:
    """Outcome of a distinguisher run.

    ``position`` is the 1-based bit position the evidence concerns. For an
    accepted trace ``evidence`` is the separator of the last tested position
    (``separators`` holds all of them); for a rejected one it is a
    :class:`HullWitness` or, when one x was seen with both labels, the
    conflicting point.
    """

    label: Label
    position: int
    evidence: Separator | HullWitness | BitVec
    separators: tuple[Separator, ...] = ()

    @property
    def is_mp(self) -> bool:
        return self.label is Label.MCCULLOCH_PITTS

    def to_dict(self) -> dict:
        out = {"verdict": str(self.label), "position": self.position}
        if isinstance(self.evidence, BitVec):
            out["conflict_point"] = str(self.evidence)
        elif isinstance(self.evidence, Separator):
            out["separator"] = self.evidence.to_dict()
        else:
            out["hull_witness"] = self.evidence.to_dict()
        return out


def bit_dichotomy(t: Trace, position: int) -> Dichotomy:
    """The dichotomy of the x's by bit ``position`` (1-based) of the y's.

    Raises :class:`PointConflict` when one x carries both labels.
    """
    j = position - 1
    pos = {x for x, y in t if y[j]}
    neg = {x for x, y in t if not y[j]}
    return Dichotomy.from_points(pos, neg, t.n)


def _test_position(t: Trace, position: int) -> Verdict:
    try:
        d = bit_dichotomy(t, position)
    except PointConflict as e:
        return Verdict(Label.NOT_MCCULLOCH_PITTS, position, e.point)
    res = decide_separable(d)
    label = Label.MCCULLOCH_PITTS if res.separable else Label.NOT_MCCULLOCH_PITTS
    return Verdict(label, position, res.witness)


def distinguish(t: Trace) -> Verdict:
    """First-bit test."""
    v = _test_position(t, 1)
    if v.is_mp:
        return Verdict(v.label, 1, v.evidence, (v.evidence,))
    return v


def distinguish_refined(t: Trace, executor: Executor | None = None) -> Verdict:
    """Accept iff every one of the n bit-position dichotomies is separable.

    The positions are independent and may be farmed out to ``executor``;
    the verdict reports the lowest failing position either way.
    """
    positions = range(1, t.n + 1)
    if executor is None:
        results = []
        for p in positions:
            v = _test_position(t, p)
            if not v.is_mp:
                return v
            results.append(v)
    else:
        results = list(executor.map(_test_position, [t] * t.n, positions))
        for v in results:
            if not v.is_mp:
                return v
    seps = tuple(v.evidence for v in results)
    return Verdict(Label.MCCULLOCH_PITTS, t.n, seps[-1], seps)


def _random_points(n: int, m: int, seed: int, stream: int) -> list[BitVec]:
    bits = _rng.generator(seed, stream).integers(0, 2, size=(m, n), dtype=np.uint8)
    return [BitVec(row.tolist()) for row in bits]


def generate_mp_trace(phi: MPSystem, m: int, seed: int) -> Trace:
    """x^i uniform on {0,1}^n from the seed's x-stream, y^i = Phi(x^i)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    xs = _random_points(phi.n, m, seed, _rng.X_STREAM)
    return Trace(tuple((x, BitVec(phi.step(x))) for x in xs))


def generate_random_trace(n: int, m: int, seed: int) -> Trace:
    """x's and y's independent and uniform; the x's match
    :func:`generate_mp_trace` under the same seed."""
    if m < 1 or n < 1:
        raise ValueError("n and m must be >= 1")
    xs = _random_points(n, m, seed, _rng.X_STREAM)
    ys = _random_points(n, m, seed, _rng.Y_STREAM)
    return Trace(tuple(zip(xs, ys)))
