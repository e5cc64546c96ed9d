"""Resource-model tests: every closed form is checked against an
independent summation or fraction evaluated here, plus the frozen
reference numbers for the N=1024 design points."""

import math
from fractions import Fraction

import pytest

from polarlist import (
    HwConfig,
    coded_throughput,
    comparator_count,
    decode_cycles,
    format_report,
    ll_storage_bits,
    ll_storage_bits_summation,
    pointer_bits,
    report,
    sc_cycles,
    total_state_bits,
)


def _sum_ll_bits(N, L, q):
    # per-stage accounting: channel pairs at width q, then 2^s pairs per
    # path at stage s with one bit of growth per level below the channel
    n = N.bit_length() - 1
    per_path = sum((1 << s) * (q + n - s) for s in range(n))
    return 2 * (N * q + L * per_path)


# ---------------------------------------------------------------------------
# storage

def test_ll_storage_reference_points():
    assert ll_storage_bits(HwConfig(1024, 2, q_ch=3)) == 26564
    assert ll_storage_bits(HwConfig(1024, 4, q_ch=3)) == 46984


def test_total_state_reference_points():
    assert total_state_bits(HwConfig(1024, 2, q_ch=3)) == 30660
    assert total_state_bits(HwConfig(1024, 4, q_ch=3)) == 55176


def test_ll_storage_closed_form_equals_summation():
    for N in (4, 16, 64, 256, 1024, 4096, 32768):
        for L in (0, 1, 2, 4, 8):
            for q in (1, 3, 4, 6):
                cfg = HwConfig(N, L, P=max(1, min(64, N // 4)), q_ch=q)
                want = _sum_ll_bits(N, L, q)
                assert ll_storage_bits(cfg) == want
                assert ll_storage_bits_summation(cfg) == want
                assert total_state_bits(cfg) == want + 2 * L * N


def test_ll_storage_degenerate_channel_only():
    cfg = HwConfig(256, 0, q_ch=5)
    assert ll_storage_bits(cfg) == 2 * 256 * 5
    assert total_state_bits(cfg) == 2 * 256 * 5


def test_storage_monotone_in_each_parameter():
    base = ll_storage_bits(HwConfig(1024, 2, q_ch=3))
    assert ll_storage_bits(HwConfig(2048, 2, q_ch=3)) > base
    assert ll_storage_bits(HwConfig(1024, 4, q_ch=3)) > base
    assert ll_storage_bits(HwConfig(1024, 2, q_ch=4)) > base


# ---------------------------------------------------------------------------
# pointers and comparators

def test_pointer_bits_reference_points():
    assert pointer_bits(HwConfig(1024, 2)) == 18
    assert pointer_bits(HwConfig(1024, 4)) == 72
    assert pointer_bits(HwConfig(1024, 1)) == 0
    assert pointer_bits(HwConfig(1024, 0)) == 0


def test_pointer_bits_formula_oracle():
    for N in (8, 64, 1024):
        n = N.bit_length() - 1
        for L in (2, 3, 4, 8):
            want = L * math.ceil(math.log2(L)) * (n - 1)
            assert pointer_bits(HwConfig(N, L, P=max(1, N // 4))) == want


def test_comparator_count():
    assert comparator_count(1) == 1
    assert comparator_count(2) == 6
    assert comparator_count(4) == 28
    for L in range(1, 12):
        assert comparator_count(L) == 2 * L * (2 * L - 1) // 2
    with pytest.raises(ValueError):
        comparator_count(0)


# ---------------------------------------------------------------------------
# cycles and throughput

def test_cycle_reference_points():
    cfg = HwConfig(1024, 2, P=64, rate=0.5)
    assert sc_cycles(cfg) == 2080
    assert decode_cycles(cfg) == 2592


def test_cycle_terms():
    for N in (256, 1024, 4096):
        for P in (16, 64, N // 4):
            for rate in (0.25, 0.5, 0.8):
                cfg = HwConfig(N, 2, P=P, rate=rate)
                second = (N / P) * math.log2(N / (4 * P))
                assert sc_cycles(cfg) == pytest.approx(2 * N + second)
                # the list scheduling overhead is exactly R*N idle cycles
                assert decode_cycles(cfg) - sc_cycles(cfg) == pytest.approx(
                    rate * N)
    cfg = HwConfig(1024, 2, P=256, rate=0.5)
    assert sc_cycles(cfg) == 2 * 1024  # P = N/4 kills the second term


def test_cycles_domain_error():
    cfg = HwConfig(1024, 2, P=512)
    with pytest.raises(ValueError):
        sc_cycles(cfg)
    with pytest.raises(ValueError):
        decode_cycles(cfg)


def test_throughput_reference_points():
    fast = HwConfig(1024, 2, P=64, rate=0.5, f_clk=459e6)
    slow = HwConfig(1024, 4, P=64, rate=0.5, f_clk=314e6)
    want_fast = Fraction(459_000_000 * 1024, 2592)
    want_slow = Fraction(314_000_000 * 1024, 2592)
    assert coded_throughput(fast) == pytest.approx(float(want_fast),
                                                   rel=1e-12)
    assert coded_throughput(slow) == pytest.approx(float(want_slow),
                                                   rel=1e-12)
    assert abs(coded_throughput(fast) / 1e6 - 181) <= 1.0
    assert abs(coded_throughput(slow) / 1e6 - 124) <= 1.0


def test_throughput_zero_clock():
    assert coded_throughput(HwConfig(1024, 2, P=64, f_clk=0.0)) == 0.0


# ---------------------------------------------------------------------------
# report plumbing

def test_report_dict_consistency():
    cfg = HwConfig(1024, 2, P=64, q_ch=3, rate=0.5, f_clk=459e6)
    r = report(cfg)
    assert r["ll_storage_bits"] == 26564
    assert r["total_state_bits"] == 30660
    assert r["pointer_bits"] == 18
    assert r["comparators"] == 6
    assert r["decode_cycles"] == 2592
    assert r["coded_throughput_bps"] == pytest.approx(coded_throughput(cfg))


def test_format_report_strings():
    fast = format_report(HwConfig(1024, 2, P=64, q_ch=3, f_clk=459e6))
    assert "2592 cycles" in fast
    assert "181.3 Mbps" in fast
    assert "18 pointer bits" in fast
    slow = format_report(HwConfig(1024, 4, P=64, q_ch=3, f_clk=314e6))
    assert "124.0 Mbps" in slow
    assert "72 pointer bits" in slow


def test_hw_config_validation():
    with pytest.raises(ValueError):
        HwConfig(1000, 2)
    with pytest.raises(ValueError):
        HwConfig(1024, -1)
    with pytest.raises(ValueError):
        HwConfig(1024, 2, P=3)
    with pytest.raises(ValueError):
        HwConfig(1024, 2, P=1024)
    with pytest.raises(ValueError):
        HwConfig(1024, 2, q_ch=0)
    with pytest.raises(ValueError):
        HwConfig(1024, 2, q_ch=17)
    with pytest.raises(ValueError):
        HwConfig(1024, 2, rate=0.0)
    with pytest.raises(ValueError):
        HwConfig(1024, 2, rate=1.5)
    with pytest.raises(ValueError):
        HwConfig(1024, 2, f_clk=-1.0)
