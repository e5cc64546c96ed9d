"""Negative log-likelihood arithmetic for the staged decoders.

A likelihood pair holds (-ln W(y|0), -ln W(y|1)); smaller means more
likely, decisions are argmins. Three evaluation models are supported:

``exact-minstar``
    the exact pair combiner min*(a, b) = -ln(e^-a + e^-b),
``approx-min``
    the same combiner with the logarithmic correction dropped,
``fixed-point``
    approx-min on quantized integer-valued operands with one extra bit
    of growth per stage (stage s works at q_ch + (n - s) bits, so no
    saturation logic is needed past the channel quantizer).

Fixed-point values are carried as integer-valued float64; every width
reachable here (q_ch + n bits) is far below the 53-bit mantissa, so the
arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

EXACT_MINSTAR = "exact-minstar"
APPROX_MIN = "approx-min"
FIXED_POINT = "fixed-point"

_MODES = (EXACT_MINSTAR, APPROX_MIN, FIXED_POINT)


@dataclass(frozen=True)
class ArithModel:
    """Evaluation model used by the f/g kernels and the decoders.

    q_ch and n are required (and only meaningful) in fixed-point mode,
    where they fix the per-stage operand widths.
    """

    mode: str
    q_ch: int | None = None
    n: int | None = None

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown arithmetic mode {self.mode!r}")
        if self.mode == FIXED_POINT:
            if self.q_ch is None or self.n is None:
                raise ValueError("fixed-point model needs q_ch and n")
            if not 1 <= int(self.q_ch) <= 16:
                raise ValueError("q_ch must be in [1, 16]")
            if self.n < 1:
                raise ValueError("n must be >= 1")

    @property
    def exact(self) -> bool:
        return self.mode == EXACT_MINSTAR

    @property
    def fixed(self) -> bool:
        return self.mode == FIXED_POINT

    @property
    def max_width(self) -> int:
        """Largest operand width in bits, reached at stage 0."""
        return self.stage_width(0)

    def stage_width(self, s: int) -> int:
        """Operand width q_ch + (n - s) of stage s, fixed-point only."""
        if not self.fixed:
            raise ValueError("stage widths are defined for fixed-point models only")
        if not 0 <= s <= self.n:
            raise ValueError(f"stage {s} outside [0, {self.n}]")
        return self.q_ch + (self.n - s)


EXACT = ArithModel(EXACT_MINSTAR)
APPROX = ArithModel(APPROX_MIN)


def fixed_point(q_ch: int, n: int) -> ArithModel:
    return ArithModel(FIXED_POINT, q_ch=q_ch, n=n)


def stage_width(model: ArithModel, s: int) -> int:
    return model.stage_width(s)


@njit(cache=True, nogil=True, inline="always")
def _minstar(x, y):
    d = x - y
    m = y if d >= 0.0 else x
    return m - math.log1p(math.exp(-abs(d)))


@njit(cache=True, nogil=True, inline="always")
def _f_kernel(a0, a1, b0, b1, exact):
    # branch sums for u=0 hypotheses agree, for u=1 they disagree
    s0 = a0 + b0
    s1 = a1 + b1
    t0 = a1 + b0
    t1 = a0 + b1
    if exact:
        return _minstar(s0, s1), _minstar(t0, t1)
    r0 = s0 if s0 <= s1 else s1
    r1 = t0 if t0 <= t1 else t1
    return r0, r1


@njit(cache=True, nogil=True, inline="always")
def _g_kernel(a0, a1, b0, b1, u):
    if u:
        return a1 + b0, a0 + b1
    return a0 + b0, a1 + b1


def min_star(a: float, b: float, exact: bool = True) -> float:
    """Combine two negative-LL branch sums: -ln(e^-a + e^-b).

    The exact form is min(a, b) - log1p(exp(-|a - b|)); with
    exact=False the correction is dropped, leaving min(a, b).
    """
    a = float(a)
    b = float(b)
    if exact:
        return _minstar(a, b)
    return min(a, b)


def _check_pair_width(pair, model: ArithModel, stage: int) -> None:
    w = model.stage_width(stage)
    lim = 1 << w
    assert pair[0] < lim and pair[1] < lim, (
        f"stage {stage} value exceeds {w} bits: {pair}"
    )


def f_ll(a, b, model: ArithModel = APPROX, stage_out: int | None = None):
    """Combine the two stage-(s+1) input pairs of an f node.

    Component k is the best (min or min*) branch sum consistent with the
    node bit being k. In fixed-point mode with stage_out given, the
    result is asserted to fit the stage_out operand width.
    """
    r = _f_kernel(float(a[0]), float(a[1]), float(b[0]), float(b[1]),
                  model.exact)
    if model.fixed and stage_out is not None:
        _check_pair_width(r, model, stage_out)
    return np.array(r)


def g_ll(a, b, u_s, model: ArithModel = APPROX, stage_out: int | None = None):
    """Combine the input pairs of a g node given the partial sum u_s.

    The partial sum conditionally swaps the components of a (the pair on
    the xor branch) before the per-hypothesis sums.
    """
    if u_s not in (0, 1):
        raise ValueError("partial sum must be 0 or 1")
    r = _g_kernel(float(a[0]), float(a[1]), float(b[0]), float(b[1]), int(u_s))
    if model.fixed and stage_out is not None:
        _check_pair_width(r, model, stage_out)
    return np.array(r)
