import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special, stats

from mcpitts.bitstats import (
    BatteryConfig,
    autocorrelation,
    block_frequency,
    chi2_sf,
    format_bit_lines,
    gammaincc,
    monobit,
    pack_bits,
    parse_bit_text,
    run_battery,
    runs_test,
    serial_pairs,
    unpack_bytes,
)
from mcpitts.rng import random_bits

TESTS = [monobit, block_frequency, runs_test, serial_pairs, autocorrelation]


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 7.5, 64.0, 3906.0])
@pytest.mark.parametrize("scale", [0.01, 0.3, 1.0, 1.7, 5.0])
def test_gammaincc_against_scipy(a, scale):
    x = a * scale
    assert gammaincc(a, x) == pytest.approx(special.gammaincc(a, x), rel=1e-9, abs=1e-300)


def test_gammaincc_edges():
    assert gammaincc(3.0, 0.0) == 1.0
    assert chi2_sf(0.0, 4) == 1.0
    assert chi2_sf(1e4, 2) == pytest.approx(math.exp(-5e3), abs=1e-300)


class TestKnownStreams:
    def test_all_zeros_fails(self):
        rep = run_battery(np.zeros(10_000, dtype=np.uint8))
        assert not rep.passed
        assert not monobit(np.zeros(1000)).passed

    def test_alternating_fails(self):
        alt = np.tile([0, 1], 5000)
        rep = run_battery(alt)
        assert not rep.passed
        # perfectly balanced: p = 1 for monobit, which the two-sided rule rejects
        assert monobit(alt).passed is False
        assert not runs_test(alt).passed
        assert not autocorrelation(alt).passed

    def test_short_streams_not_applicable(self):
        for t in TESTS:
            r = t(np.ones(50, dtype=np.uint8))
            assert not r.applicable
        assert run_battery(np.ones(50, dtype=np.uint8)).passed  # vacuous

    def test_reference_epsilon_example(self):
        # the 100-bit epsilon expansion example used for the frequency test
        eps = (
            "11001001000011111101101010100010001000010110100011"
            "00001000110100110001001100011001100010100010111000"
        )
        r = monobit(parse_bit_text(eps))
        assert r.p_value == pytest.approx(0.109599, abs=1e-6)
        r = runs_test(parse_bit_text(eps))
        assert r.p_value == pytest.approx(0.500798, abs=1e-6)


def oracle_pvalues(bits, block_len=128, lag=1):
    """Independent recomputation with scipy distributions."""
    b = np.asarray(bits, dtype=np.int64)
    n = len(b)
    out = {}
    s = abs(2 * b.sum() - n) / math.sqrt(n)
    out["monobit"] = 2 * stats.norm.sf(s)
    N = n // block_len
    pis = b[: N * block_len].reshape(N, block_len).mean(axis=1)
    out["block_frequency"] = stats.chi2.sf(4 * block_len * ((pis - 0.5) ** 2).sum(), N)
    pi = b.mean()
    runs = 1 + np.count_nonzero(np.diff(b))
    if abs(pi - 0.5) >= 2 / math.sqrt(n):
        out["runs_test"] = 0.0
    else:
        out["runs_test"] = special.erfc(abs(runs - 2 * n * pi * (1 - pi)) / (2 * math.sqrt(2 * n) * pi * (1 - pi)))
    ext = np.concatenate([b, b[:1]])
    v2 = np.array([np.sum((ext[:-1] == i) & (ext[1:] == j)) for i in (0, 1) for j in (0, 1)])
    v1 = np.array([np.sum(b == 0), np.sum(b == 1)])
    d = (4 / n * (v2**2).sum() - n) - (2 / n * (v1**2).sum() - n)
    out["serial_pairs"] = stats.chi2.sf(d, 2)
    m = n - lag
    agree = np.sum(b[lag:] == b[:-lag])
    out["autocorrelation"] = 2 * stats.norm.sf(abs(2 * agree - m) / math.sqrt(m))
    return out


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("length", [128, 1000, 20_000])
def test_pvalues_match_scipy(seed, length):
    bits = random_bits(seed, length)
    want = oracle_pvalues(bits)
    for r in run_battery(bits).results:
        assert r.p_value == pytest.approx(want[r.name], rel=1e-4, abs=1e-12), r.name


def test_biased_stream_oracle():
    g = np.random.default_rng(5)
    bits = (g.random(5000) < 0.47).astype(np.uint8)
    want = oracle_pvalues(bits)
    for r in run_battery(bits).results:
        assert r.p_value == pytest.approx(want[r.name], rel=1e-4, abs=1e-12), r.name


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(100, 3000))
def test_complement_symmetry(seed, length):
    bits = random_bits(seed, length)
    for t in TESTS:
        a, b = t(bits), t(1 - bits)
        assert a.applicable == b.applicable
        if a.applicable:
            assert a.p_value == pytest.approx(b.p_value, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(100, 3000))
def test_reversal_symmetry(seed, length):
    bits = random_bits(seed, length)
    for t in (monobit, runs_test, serial_pairs, autocorrelation):
        a, b = t(bits), t(bits[::-1])
        assert a.applicable == b.applicable
        if a.applicable:
            assert a.p_value == pytest.approx(b.p_value, rel=1e-9)


class TestConfig:
    def test_bare_alpha(self):
        bits = random_bits(1, 2000)
        assert run_battery(bits, 0.05).config == BatteryConfig(alpha=0.05)

    @pytest.mark.parametrize("kw", [dict(alpha=0), dict(alpha=0.5), dict(block_len=0), dict(lag=0)])
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            BatteryConfig(**kw)

    def test_non_bits(self):
        with pytest.raises(ValueError):
            monobit([0, 1, 2] * 50)


class TestStreamIO:
    @given(st.lists(st.integers(0, 1), max_size=300))
    def test_pack_roundtrip(self, bits):
        back = unpack_bytes(pack_bits(bits), len(bits))
        assert back.tolist() == bits

    def test_msb_first(self):
        assert unpack_bytes(b"\x80").tolist() == [1, 0, 0, 0, 0, 0, 0, 0]

    def test_text_roundtrip(self):
        bits = random_bits(3, 200)
        text = format_bit_lines(bits, width=64)
        assert len(text.splitlines()) == 4
        assert np.array_equal(parse_bit_text("# header\n" + text), bits)

    def test_bad_text(self):
        with pytest.raises(ValueError):
            parse_bit_text("0102")
