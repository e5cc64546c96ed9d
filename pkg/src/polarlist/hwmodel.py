"""Closed-form hardware cost model for the list decoder architecture.

Pure arithmetic over a small config record: memory footprints (channel,
stage, partial-sum, path, and pointer memories), metric-sorter
comparator count, per-codeword cycle counts for a semi-parallel core
with P processing elements, and the resulting coded throughput. All
logs are base 2. The LL storage total is exposed through two
independently derived routes (closed form and per-stage summation) that
must agree exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _is_pow2(v: int) -> bool:
    return v >= 1 and (v & (v - 1)) == 0


@dataclass(frozen=True)
class HwConfig:
    """Decoder configuration: block length N, list size L, processing
    elements P, channel LL width q_ch (bits), code rate, clock (Hz)."""

    N: int
    L: int
    P: int = 64
    q_ch: int = 3
    rate: float = 0.5
    f_clk: float = 459e6

    def __post_init__(self):
        if not _is_pow2(self.N) or self.N < 2:
            raise ValueError("N must be a power of two >= 2")
        if self.L < 0:
            raise ValueError("L must be >= 0")
        if not _is_pow2(self.P) or self.P > self.N // 2:
            raise ValueError("P must be a power of two <= N/2")
        if not 1 <= self.q_ch <= 16:
            raise ValueError("q_ch must be in [1, 16]")
        if not 0.0 < self.rate <= 1.0:
            raise ValueError("rate must be in (0, 1]")
        if self.f_clk < 0:
            raise ValueError("f_clk must be >= 0")

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1


def ll_storage_bits(cfg: HwConfig) -> int:
    """Bits of likelihood storage: shared channel memory plus L stage
    memories with per-stage bit growth. Closed form; L=0 degenerates to
    the channel memory alone."""
    return (2 * cfg.L + 2) * cfg.N * cfg.q_ch \
        + 2 * cfg.L * (2 * cfg.N - cfg.n - cfg.q_ch - 2)


def ll_storage_bits_summation(cfg: HwConfig) -> int:
    """Same quantity summed stage by stage: stage s holds 2^s pairs of
    (q_ch + n - s)-bit values per path memory, plus the channel pairs."""
    per_path = sum((1 << s) * (cfg.q_ch + cfg.n - s) for s in range(cfg.n))
    return 2 * (cfg.N * cfg.q_ch + cfg.L * per_path)


def total_state_bits(cfg: HwConfig) -> int:
    """ll_storage_bits plus the partial-sum and path memories (one bit
    per position per path each, 2LN together)."""
    return ll_storage_bits(cfg) + 2 * cfg.L * cfg.N


def pointer_bits(cfg: HwConfig) -> int:
    """Pointer memory: L rows of n-1 entries, ceil(log2 L) bits each."""
    if cfg.L <= 1:
        return 0
    return cfg.L * (cfg.L - 1).bit_length() * (cfg.n - 1)


def comparator_count(L: int) -> int:
    """Comparators in the radix-2L metric sorter: 2L(2L-1)/2."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return L * (2 * L - 1)


def _cycle_second_term(cfg: HwConfig) -> float:
    if cfg.N < 4 * cfg.P:
        raise ValueError("cycle model requires N >= 4P")
    return (cfg.N / cfg.P) * math.log2(cfg.N / (4 * cfg.P))


def sc_cycles(cfg: HwConfig) -> float:
    """Cycles per codeword for the semi-parallel core without the
    selection idle cycles: 2N + (N/P) log2(N/(4P))."""
    return 2 * cfg.N + _cycle_second_term(cfg)


def decode_cycles(cfg: HwConfig) -> float:
    """List-decode cycles per codeword: sc_cycles plus one idle cycle
    per selection, R*N in total."""
    return (2 + cfg.rate) * cfg.N + _cycle_second_term(cfg)


def coded_throughput(cfg: HwConfig) -> float:
    """Coded bits per second: f_clk * N / decode_cycles."""
    return cfg.f_clk * cfg.N / decode_cycles(cfg)


def report(cfg: HwConfig) -> dict:
    """All model outputs as a flat JSON-friendly dict."""
    return {
        "N": cfg.N,
        "n": cfg.n,
        "L": cfg.L,
        "P": cfg.P,
        "q_ch": cfg.q_ch,
        "rate": cfg.rate,
        "f_clk_hz": cfg.f_clk,
        "ll_storage_bits": ll_storage_bits(cfg),
        "total_state_bits": total_state_bits(cfg),
        "pointer_bits": pointer_bits(cfg),
        "comparators": comparator_count(cfg.L) if cfg.L >= 1 else 0,
        "sc_cycles": sc_cycles(cfg),
        "decode_cycles": decode_cycles(cfg),
        "coded_throughput_bps": coded_throughput(cfg),
    }


def _cycles_str(c: float) -> str:
    return f"{int(c)}" if float(c).is_integer() else f"{c:.1f}"


def format_report(cfg: HwConfig) -> str:
    """Human-readable report table."""
    r = report(cfg)
    lines = [
        "hardware cost model",
        f"  code            N={r['N']} (n={r['n']}), rate {r['rate']:g}",
        f"  list size       L={r['L']}",
        f"  core            P={r['P']} PEs, Q_ch={r['q_ch']} bits",
        "memory",
        f"  LL storage      {r['ll_storage_bits']} bits",
        f"  total state     {r['total_state_bits']} bits",
        f"  pointer memory  {r['pointer_bits']} pointer bits",
        f"  metric sorter   {r['comparators']} comparators",
        "timing",
        f"  SC schedule     {_cycles_str(r['sc_cycles'])} cycles",
        f"  list schedule   {_cycles_str(r['decode_cycles'])} cycles",
        f"  throughput      {r['coded_throughput_bps'] / 1e6:.1f} Mbps"
        f" at {r['f_clk_hz'] / 1e6:g} MHz",
    ]
    return "\n".join(lines) + "\n"
