"""A small battery of statistical randomness tests for bit streams.

Five tests, each returning a two-sided decision: a stream passes a test when
``alpha <= p <= 1 - alpha``, so suspiciously *regular* streams fail as well
as biased ones.

========================  =================================  ===========
test                      statistic                          min length
========================  =================================  ===========
``monobit``               |#1 - #0| / sqrt(N)                100
``block_frequency``       4M sum (pi_i - 1/2)^2, chi^2(N/M)  one block
``runs_test``             total number of runs               100
``serial_pairs``          psi^2_2 - psi^2_1, chi^2(2)        100
``autocorrelation``       normalized agreement at lag d      100 + d
========================  =================================  ===========

The chi-square tail is the regularized upper incomplete gamma function
Q(a, x), evaluated by its power series for x < a + 1 and by a Lentz
continued fraction otherwise; both are iterated to relative accuracy 1e-15.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 10_000

MIN_LENGTH = 100


def _gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by its series."""
    term = total = 1.0 / a
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by modified Lentz."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gammaincc(a: float, x: float) -> float:
    """Q(a, x) = Gamma(a, x) / Gamma(a)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x <= 0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_cf(a, x))


def chi2_sf(stat: float, df: float) -> float:
    """Upper tail of the chi-square distribution."""
    return gammaincc(df / 2.0, stat / 2.0)


@dataclass(frozen=True)
class TestResult:
    name: str
    statistic: float
    p_value: float
    passed: bool
    applicable: bool = True
    params: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        d = asdict(self)
        if not self.applicable:
            d["statistic"] = d["p_value"] = None
        return d


def _decide(name, stat, p, alpha, **params) -> TestResult:
    p = min(1.0, max(0.0, p))
    return TestResult(name, float(stat), p, alpha <= p <= 1.0 - alpha, True, params)


def _not_applicable(name, **params) -> TestResult:
    return TestResult(name, math.nan, math.nan, False, False, params)


def _as_bits(stream) -> np.ndarray:
    bits = np.asarray(stream, dtype=np.uint8).ravel()
    if bits.size and bits.max() > 1:
        raise ValueError("stream must contain only 0 and 1")
    return bits


def monobit(stream, alpha: float = 0.01) -> TestResult:
    bits = _as_bits(stream)
    n = bits.size
    if n < MIN_LENGTH:
        return _not_applicable("monobit")
    s = 2 * int(bits.sum()) - n
    stat = abs(s) / math.sqrt(n)
    return _decide("monobit", stat, math.erfc(stat / math.sqrt(2)), alpha)


def block_frequency(stream, block_len: int = 128, alpha: float = 0.01) -> TestResult:
    bits = _as_bits(stream)
    blocks = bits.size // block_len
    if bits.size < MIN_LENGTH or blocks < 1:
        return _not_applicable("block_frequency", block_len=block_len)
    ones = bits[: blocks * block_len].reshape(blocks, block_len).sum(axis=1, dtype=np.int64)
    # 4M sum (pi - 1/2)^2 with pi = ones/M, kept in integers until the end
    stat = float(((2 * ones - block_len) ** 2).sum()) / block_len
    return _decide("block_frequency", stat, chi2_sf(stat, blocks), alpha, block_len=block_len)


def runs_test(stream, alpha: float = 0.01) -> TestResult:
    """Total number of runs given the observed fraction of ones.

    The test is only meaningful when the fraction is near 1/2; otherwise
    (|pi - 1/2| >= 2/sqrt(N)) it reports p = 0.
    """
    bits = _as_bits(stream)
    n = bits.size
    if n < MIN_LENGTH:
        return _not_applicable("runs_test")
    pi = bits.sum() / n
    runs = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    if abs(pi - 0.5) >= 2 / math.sqrt(n):
        return _decide("runs_test", runs, 0.0, alpha)
    v = pi * (1 - pi)
    p = math.erfc(abs(runs - 2 * n * v) / (2 * math.sqrt(2 * n) * v))
    return _decide("runs_test", runs, p, alpha)


def serial_pairs(stream, alpha: float = 0.01) -> TestResult:
    """Overlapping 2-bit patterns (cyclic), chi-square with 2 degrees of freedom.

    The statistic is psi^2_2 - psi^2_1, which removes the single-bit
    frequencies so that only the pair structure is tested.
    """
    bits = _as_bits(stream)
    n = bits.size
    if n < MIN_LENGTH:
        return _not_applicable("serial_pairs")
    b = bits.astype(np.int64)
    pairs = 2 * b + np.roll(b, -1)
    c2 = np.bincount(pairs, minlength=4).astype(np.int64)
    c1 = np.bincount(b, minlength=2).astype(np.int64)
    psi2 = 4 * int((c2**2).sum()) / n - n
    psi1 = 2 * int((c1**2).sum()) / n - n
    stat = psi2 - psi1
    return _decide("serial_pairs", stat, chi2_sf(stat, 2), alpha)


def autocorrelation(stream, lag: int = 1, alpha: float = 0.01) -> TestResult:
    """Agreements between bit i and bit i + lag, normalized to N(0, 1)."""
    bits = _as_bits(stream)
    if lag < 1:
        raise ValueError("lag must be >= 1")
    n = bits.size - lag
    if bits.size < MIN_LENGTH + lag:
        return _not_applicable("autocorrelation", lag=lag)
    agree = n - int(np.count_nonzero(bits[lag:] != bits[:-lag]))
    z = (2 * agree - n) / math.sqrt(n)
    return _decide("autocorrelation", abs(z), math.erfc(abs(z) / math.sqrt(2)), alpha, lag=lag)


@dataclass(frozen=True)
class BatteryConfig:
    alpha: float = 0.01
    block_len: int = 128
    lag: int = 1

    def __post_init__(self):
        if not 0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 0.5)")
        if self.block_len < 1 or self.lag < 1:
            raise ValueError("block_len and lag must be >= 1")


@dataclass(frozen=True)
class BatteryReport:
    length: int
    config: BatteryConfig
    results: tuple[TestResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if r.applicable)

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "alpha": self.config.alpha,
            "block_len": self.config.block_len,
            "lag": self.config.lag,
            "passed": self.passed,
            "tests": [r.to_dict() for r in self.results],
        }


def run_battery(stream, config: BatteryConfig | float | None = None) -> BatteryReport:
    """Run all five tests. ``config`` may be a bare alpha."""
    if config is None:
        config = BatteryConfig()
    elif not isinstance(config, BatteryConfig):
        config = BatteryConfig(alpha=float(config))
    bits = _as_bits(stream)
    a = config.alpha
    results = (
        monobit(bits, a),
        block_frequency(bits, config.block_len, a),
        runs_test(bits, a),
        serial_pairs(bits, a),
        autocorrelation(bits, config.lag, a),
    )
    return BatteryReport(int(bits.size), config, results)


def parse_bit_text(text: str) -> np.ndarray:
    """'0'/'1' characters; whitespace and ``#`` comment lines are ignored."""
    chars = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        chars.extend(c for c in line if not c.isspace())
    bad = set(chars) - {"0", "1"}
    if bad:
        raise ValueError(f"unexpected characters in bit stream: {sorted(bad)}")
    return np.frombuffer("".join(chars).encode(), dtype=np.uint8) - ord("0")


def unpack_bytes(data: bytes, length: int | None = None) -> np.ndarray:
    """Packed bits, first bit = most significant bit of the first byte."""
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    return bits if length is None else bits[:length]


def pack_bits(bits: Sequence[int]) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def format_bit_lines(bits: Sequence[int], width: int = 64) -> str:
    s = "".join("1" if b else "0" for b in bits)
    return "".join(s[i:i + width] + "\n" for i in range(0, len(s), width))
