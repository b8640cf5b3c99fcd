from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mcpitts.bitstats import BatteryConfig, parse_bit_text
from mcpitts.dynamics import (
    CycleBudgetExceeded,
    CycleInfo,
    SystemGenSpec,
    find_cycle,
    first_bit_stream,
    orbit,
    prefix_projection,
    random_system,
    search_pseudorandom_system,
    trajectory,
)
from mcpitts.formats import load_system
from mcpitts.model import BitVec, DimensionError, MPSystem, constant_system, cyclic_shift_system, identity_system

DATA = Path(__file__).parent / "data"


def naive_cycle(phi, x0):
    """Tail and period from a dict of every visited state."""
    seen, x, t = {}, tuple(x0), 0
    while x not in seen:
        seen[x] = t
        x = phi.step(x)
        t += 1
    return CycleInfo(seen[x], t - seen[x])


def test_identity_is_fixed():
    x = BitVec("0110")
    assert trajectory(identity_system(4), x, 3) == [x] * 4
    assert find_cycle(identity_system(4), x, 1) == CycleInfo(0, 1)


def test_cyclic_shift_period():
    phi = cyclic_shift_system(5)
    assert find_cycle(phi, BitVec("10000"), 5) == CycleInfo(0, 5)
    assert find_cycle(phi, BitVec("10100"), 5) == CycleInfo(0, 5)
    assert find_cycle(phi, BitVec("00000"), 5) == CycleInfo(0, 1)


def test_constant_system_has_tail_one():
    phi = constant_system(3)
    assert find_cycle(phi, BitVec("010"), 4) == CycleInfo(1, 1)
    assert find_cycle(phi, BitVec("111"), 4) == CycleInfo(0, 1)


def test_two_cycle_with_tail():
    # x1' = [x2 <= 0], x2' = 0: 01 -> 00 -> 10 -> 10
    phi = MPSystem.from_integers([[0, -1], [0, 0]], [0, 1])
    assert trajectory(phi, BitVec("01"), 2) == [BitVec("01"), BitVec("00"), BitVec("10")]
    assert find_cycle(phi, BitVec("01"), 4) == CycleInfo(2, 1)
    # a genuine period-2 flip
    flip = MPSystem.from_integers([[-1]], [0])
    assert find_cycle(flip, BitVec("1"), 2) == CycleInfo(0, 2)


def test_budget_exceeded():
    phi = cyclic_shift_system(8)
    with pytest.raises(CycleBudgetExceeded):
        find_cycle(phi, BitVec("10000000"), 7)
    assert find_cycle(phi, BitVec("10000000"), 8).period == 8


def test_width_mismatch():
    with pytest.raises(DimensionError):
        trajectory(identity_system(3), BitVec("01"), 1)


@pytest.mark.parametrize("n", [1, 3, 6, 9])
def test_prefix_projection_full_width_is_step(n):
    phi = random_system(SystemGenSpec(n, seed=n))
    for k in range(min(2**n, 40)):
        x = BitVec.from_int(k, n)
        assert prefix_projection(phi, x, n) == phi(x)
        assert prefix_projection(phi, x, 1) == BitVec(phi(x)[:1])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**40), st.integers(0, 80))
def test_orbit_matches_step_by_step(n, seed, steps):
    phi = random_system(SystemGenSpec(n, seed=seed))
    x0 = BitVec.from_int(seed % 2**n, n)
    states, info = orbit(phi, x0, steps)
    assert [BitVec(r.tolist()) for r in states] == trajectory(phi, x0, steps)
    if info is not None:
        assert info == naive_cycle(phi, x0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**40), st.integers(-4, 0), st.integers(0, 4))
def test_find_cycle_matches_dict_method(n, seed, lo, hi):
    phi = random_system(SystemGenSpec(n, lo, hi, lo, hi, seed=seed))
    x0 = BitVec.from_int((seed * 7) % 2**n, n)
    assert find_cycle(phi, x0, 2**n) == naive_cycle(phi, x0)


class TestGolden:
    phi = load_system((DATA / "system_n10_seed3.json").read_text())

    def test_system_reproduces(self):
        assert random_system(SystemGenSpec(10, seed=3)) == self.phi

    def test_trajectory(self):
        want = [BitVec.from_str(l) for l in (DATA / "trajectory_n10_seed3.txt").read_text().split()]
        assert trajectory(self.phi, want[0], 40) == want

    def test_first_bits(self):
        want = parse_bit_text((DATA / "first_bits_n10_seed3.txt").read_text())
        got = first_bit_stream(self.phi, BitVec("1011001110"), 256)
        assert np.array_equal(got, want)

    def test_cycle(self):
        assert find_cycle(self.phi, BitVec("1011001110"), 1024) == CycleInfo(7, 6)


class TestRandomSystem:
    def test_deterministic(self):
        assert random_system(SystemGenSpec(7, seed=42)) == random_system(SystemGenSpec(7, seed=42))
        assert random_system(SystemGenSpec(7, seed=42)) != random_system(SystemGenSpec(7, seed=43))

    def test_degenerate_range(self):
        phi = random_system(SystemGenSpec(3, 2, 2, 1, 1, seed=0))
        assert all(u.weights == (2, 2, 2) and u.theta == 1 for u in phi.units)

    def test_ranges_respected(self):
        phi = random_system(SystemGenSpec(12, -1, 1, 0, 3, seed=9))
        for u in phi.units:
            assert all(-1 <= w <= 1 for w in u.weights) and 0 <= u.theta <= 3

    @pytest.mark.parametrize("kw", [dict(n=0), dict(n=2, weight_low=3, weight_high=1), dict(n=2, seed=-1)])
    def test_bad_specs(self, kw):
        with pytest.raises(ValueError):
            SystemGenSpec(**kw)


class TestSearch:
    def test_single_attempt_is_attempt_zero(self):
        rep = search_pseudorandom_system(8, 512, attempts=1, seed=4)
        assert rep.attempt == 0
        stream = first_bit_stream(rep.system, rep.start, 512)
        assert rep.battery.length == len(stream)

    def test_best_has_maximum_score(self):
        reps = [search_pseudorandom_system(10, 1024, attempts=k, seed=11) for k in (1, 4, 12)]
        scores = [r.score for r in reps]
        assert scores == sorted(scores)

    def test_executor_does_not_change_answer(self):
        serial = search_pseudorandom_system(9, 512, BatteryConfig(), attempts=6, seed=1)
        with ThreadPoolExecutor(3) as ex:
            par = search_pseudorandom_system(9, 512, BatteryConfig(), attempts=6, seed=1, executor=ex)
        assert serial.to_dict() == par.to_dict()

    def test_period_agrees_with_find_cycle(self):
        rep = search_pseudorandom_system(6, 256, attempts=3, seed=2)
        if rep.period is not None:
            assert find_cycle(rep.system, rep.start, 64) == CycleInfo(rep.tail, rep.period)
