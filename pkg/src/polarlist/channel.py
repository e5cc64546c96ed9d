"""BPSK mapping, AWGN, and channel negative log-likelihoods.

The simplified LL form drops every term that is common to both
hypotheses up to a positive scale: (y -/+ 1)^2. The full form is the
exact -ln of the Gaussian density. Decisions and (min-approximated)
decoder outputs agree between the two; the simplified form is what the
quantizer and the fixed-point pipeline consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelParams:
    """AWGN noise level (per-dimension standard deviation)."""

    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError("sigma must be positive and finite")

    @classmethod
    def from_ebn0_db(cls, ebn0_db: float, rate: float) -> "ChannelParams":
        """Rate-normalized SNR: sigma^2 = 1 / (2 R 10^(EbN0/10))."""
        if not 0 < rate <= 1:
            raise ValueError("rate must be in (0, 1]")
        return cls(sigma=(2.0 * rate * 10.0 ** (ebn0_db / 10.0)) ** -0.5)

    @property
    def sigma_sq(self) -> float:
        return self.sigma * self.sigma


@dataclass(frozen=True)
class QuantConfig:
    """Uniform channel-LL quantizer: q_ch output bits, step delta."""

    q_ch: int
    delta: float = 1.0

    def __post_init__(self):
        if not 1 <= self.q_ch <= 16:
            raise ValueError("q_ch must be in [1, 16]")
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise ValueError("delta must be positive and finite")

    @property
    def max_level(self) -> int:
        return (1 << self.q_ch) - 1


def modulate(bits) -> np.ndarray:
    """BPSK map 0 -> +1, 1 -> -1."""
    x = np.asarray(bits)
    if np.any((x != 0) & (x != 1)):
        raise ValueError("bits must be 0/1")
    return 1.0 - 2.0 * x.astype(np.float64)


def add_awgn(symbols, params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    s = np.asarray(symbols, dtype=np.float64)
    return s + params.sigma * rng.standard_normal(s.shape)


def channel_ll(y, params: ChannelParams | None = None, simplified: bool = True):
    """Per-sample negative log-likelihood pairs for BPSK on AWGN.

    Returns an array with a trailing axis of size 2 holding
    (-ln W(y|0), -ln W(y|1)). A scalar y yields shape (2,).
    """
    y = np.asarray(y, dtype=np.float64)
    d0 = np.square(y - 1.0)
    d1 = np.square(y + 1.0)
    if simplified:
        return np.stack((d0, d1), axis=-1)
    if params is None:
        raise ValueError("full-form LLs need ChannelParams")
    two_var = 2.0 * params.sigma_sq
    const = math.log(math.sqrt(math.pi * two_var))
    return np.stack((d0 / two_var + const, d1 / two_var + const), axis=-1)


def quantize_ll(pairs, quant: QuantConfig) -> np.ndarray:
    """Round-half-to-even to multiples of delta, saturating at 2^q_ch - 1.

    Inputs are simplified-form LLs (non-negative); outputs are
    integer-valued float64 levels ready for the fixed-point decoders.
    """
    p = np.asarray(pairs, dtype=np.float64)
    if np.any(p < 0):
        raise ValueError("quantizer inputs must be non-negative")
    return np.clip(np.rint(p / quant.delta), 0.0, float(quant.max_level))


def normalize_ll_pairs(pairs) -> np.ndarray:
    """Subtract each pair's minimum so one component is exactly 0.

    Adding a common constant to an LL pair shifts every downstream
    value by a constant and changes no decoder decision, so this is a
    free preconditioning step. Applied before quantize_ll it spends the
    quantizer range on the pair difference (the part that matters)
    instead of the common offset, which measurably reduces the
    fixed-point penalty.
    """
    p = np.asarray(pairs, dtype=np.float64)
    if p.shape[-1] != 2:
        raise ValueError("expected a trailing axis of size 2")
    return p - p.min(axis=-1, keepdims=True)
