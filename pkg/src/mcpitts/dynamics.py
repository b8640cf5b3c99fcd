"""Trajectories of McCulloch-Pitts systems: iteration, prefix projections,
first-bit streams, cycle detection, random systems and the search for
systems whose first-bit stream looks random."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import rng as _rng
from .bitstats import BatteryConfig, BatteryReport, run_battery
from .model import BitVec, DimensionError, MPSystem


class CycleBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CycleInfo:
    tail: int
    period: int


@dataclass(frozen=True)
class SystemGenSpec:
    n: int
    weight_low: int = -8
    weight_high: int = 8
    theta_low: int = -8
    theta_high: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.weight_low > self.weight_high or self.theta_low > self.theta_high:
            raise ValueError("sampling ranges need low <= high")
        _rng.check_seed(self.seed)


def _check_width(phi: MPSystem, x: Sequence[int]):
    if len(x) != phi.n:
        raise DimensionError(f"system has dimension {phi.n}, state has width {len(x)}")


def trajectory(phi: MPSystem, x0: Sequence[int], steps: int) -> list[BitVec]:
    """``[x0, Phi(x0), ..., Phi^steps(x0)]``."""
    _check_width(phi, x0)
    if steps < 0:
        raise ValueError("steps must be >= 0")
    out = [BitVec(x0)]
    x = tuple(x0)
    for _ in range(steps):
        x = phi.step(x)
        out.append(BitVec(x))
    return out


def prefix_projection(phi: MPSystem, x: Sequence[int], m: int) -> BitVec:
    """The first ``m`` bits of Phi(x)."""
    _check_width(phi, x)
    if not 1 <= m <= phi.n:
        raise ValueError(f"prefix length must be in [1, {phi.n}]")
    return BitVec(phi.step(x)[:m])


def _integer_matrix(phi: MPSystem) -> tuple[np.ndarray, np.ndarray]:
    rows = [u.integer_form for u in phi.units]
    bound = max(max((abs(v) for v in w), default=0) for w, _ in rows) * phi.n
    # exact Python integers when int64 accumulation could overflow
    dtype = np.int64 if bound < 2**62 else object
    return np.array([w for w, _ in rows], dtype=dtype), np.array([t for _, t in rows], dtype=dtype)


def orbit(phi: MPSystem, x0: Sequence[int], steps: int) -> tuple[np.ndarray, CycleInfo | None]:
    """States ``Phi^t(x0)`` for t = 0..steps as rows of a uint8 array, plus
    the cycle structure when a state repeats within range.

    After the first repeat the remaining rows are copied from the cycle
    rather than simulated.
    """
    _check_width(phi, x0)
    if steps < 0:
        raise ValueError("steps must be >= 0")
    W, theta = _integer_matrix(phi)
    out = np.empty((steps + 1, phi.n), dtype=np.uint8)
    x = np.array(x0, dtype=np.uint8)
    seen: dict[bytes, int] = {}
    for t in range(steps + 1):
        key = x.tobytes()
        if key in seen:
            tail = seen[key]
            period = t - tail
            idx = tail + (np.arange(t, steps + 1) - tail) % period
            out[t:] = out[idx]
            return out, CycleInfo(tail, period)
        seen[key] = t
        out[t] = x
        x = (W @ x >= theta).astype(np.uint8)
    return out, None


def first_bit_stream(phi: MPSystem, x0: Sequence[int], length: int) -> np.ndarray:
    """Bits ``t = 1..length``: the first bit of Phi^t(x0), as uint8."""
    if length < 0:
        raise ValueError("length must be >= 0")
    states, _ = orbit(phi, x0, length)
    return states[1:, 0].copy()


def find_cycle(phi: MPSystem, x0: Sequence[int], budget: int) -> CycleInfo:
    """Tail and minimal period of the orbit of ``x0`` by Brent's method.

    Uses constant memory. ``budget`` bounds tail + period: if the orbit is
    not periodic within that many distinct states,
    :class:`CycleBudgetExceeded` is raised (after at most about
    ``3 * budget`` evaluations). Any ``budget >= 2**n`` always succeeds.
    The answer is re-checked by direct simulation before returning.
    """
    _check_width(phi, x0)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    f = phi.step
    start = tuple(x0)
    limit = 3 * budget + 2

    power = lam = 1
    tortoise, hare = start, f(start)
    evals = 1
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
        evals += 1
        if evals > limit:
            raise CycleBudgetExceeded(f"no cycle closed within budget {budget}")

    tortoise = hare = start
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    if mu + lam > budget:
        raise CycleBudgetExceeded(f"tail + period = {mu + lam} exceeds budget {budget}")
    info = CycleInfo(mu, lam)
    _recheck(f, start, info)
    return info


def _recheck(f, start, info: CycleInfo):
    x = start
    for _ in range(info.tail):
        x = f(x)
    y = f(x)
    for k in range(1, info.period):
        if y == x:
            raise AssertionError(f"period {info.period} not minimal, {k} works")
        y = f(y)
    if y != x:
        raise AssertionError("state does not recur after one period")
    if info.tail:
        # the state just before the cycle entry must not lie on the cycle
        x = start
        for _ in range(info.tail - 1):
            x = f(x)
        y = x
        for _ in range(info.period):
            y = f(y)
        if y == x:
            raise AssertionError("tail is not minimal")


def random_system(spec: SystemGenSpec) -> MPSystem:
    """Integer weights and thresholds, each uniform on its inclusive range."""
    g = _rng.generator(spec.seed, _rng.SYSTEM_STREAM)
    W = g.integers(spec.weight_low, spec.weight_high, size=(spec.n, spec.n), endpoint=True)
    theta = g.integers(spec.theta_low, spec.theta_high, size=spec.n, endpoint=True)
    return MPSystem.from_integers(W.tolist(), theta.tolist())


@dataclass(frozen=True)
class CandidateReport:
    attempt: int
    system_seed: int
    start: BitVec
    stream_len: int
    passed: int
    applicable: int
    period: int | None
    tail: int | None
    battery: BatteryReport
    system: MPSystem

    @property
    def score(self) -> tuple[int, int]:
        # an orbit that never closed within the stream beats any closed one
        return (self.passed, self.period if self.period is not None else self.stream_len + 1)

    def to_dict(self) -> dict:
        from .formats import system_to_dict

        return {
            "attempt": self.attempt,
            "system_seed": self.system_seed,
            "start": str(self.start),
            "stream_len": self.stream_len,
            "tests_passed": self.passed,
            "tests_applicable": self.applicable,
            "period": self.period,
            "tail": self.tail,
            "battery": self.battery.to_dict(),
            "system": system_to_dict(self.system),
        }


def _evaluate_attempt(args) -> CandidateReport:
    n, stream_len, config, seed, k, wrange, trange = args
    sys_seed = _rng.derive_seed(seed, _rng.ATTEMPT_STREAM, k)
    phi = random_system(SystemGenSpec(n, *wrange, *trange, seed=sys_seed))
    start = BitVec(_rng.generator(sys_seed, _rng.START_STREAM).integers(0, 2, size=n).tolist())
    states, cycle = orbit(phi, start, stream_len)
    stream = states[1:, 0].copy()
    report = run_battery(stream, config)
    passed = sum(1 for r in report.results if r.applicable and r.passed)
    applicable = sum(1 for r in report.results if r.applicable)
    return CandidateReport(
        attempt=k,
        system_seed=sys_seed,
        start=start,
        stream_len=stream_len,
        passed=passed,
        applicable=applicable,
        period=cycle.period if cycle else None,
        tail=cycle.tail if cycle else None,
        battery=report,
        system=phi,
    )


def search_pseudorandom_system(
    n: int,
    stream_len: int,
    battery_config: BatteryConfig | None = None,
    attempts: int = 1,
    seed: int = 0,
    weight_range: tuple[int, int] = (-8, 8),
    theta_range: tuple[int, int] = (-8, 8),
    executor=None,
) -> CandidateReport:
    """Best of ``attempts`` random systems by (battery tests passed, period).

    Attempt ``k`` draws its system and start state from its own derived
    seed, so the answer does not depend on evaluation order; ties go to the
    lowest attempt index.
    """
    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    config = battery_config or BatteryConfig()
    jobs = [(n, stream_len, config, seed, k, weight_range, theta_range) for k in range(attempts)]
    mapper = executor.map if executor is not None else map
    best = None
    for rep in mapper(_evaluate_attempt, jobs):
        if best is None or rep.score > best.score or (rep.score == best.score and rep.attempt < best.attempt):
            best = rep
    return best
