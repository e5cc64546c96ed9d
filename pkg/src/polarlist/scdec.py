"""Successive-cancellation decoding over the staged dependency graph.

Stage s in [0, n] holds 2^s likelihood slots; stage n is the received
channel pairs (stored separately and never overwritten), stage 0 the
decision metric for the current bit. Node j of stage s combines slots j
and j + 2^s of stage s+1, applying f when bit s of the 0-based bit index
is clear and g (with a partial sum) when it is set, so a whole stage
runs a single node type per bit.

Intermediate stages use a heap layout: stage s occupies rows
[2^s, 2^(s+1)) of an N-row array (row 0 is padding). Partial sums use
the same layout in an N-cell bit array: cell 2^s + j feeds the g node j
of stage s and holds the xor-folded encoding of the left-half input
block that node pairs with.

Every path of a decode refreshes the same stages at the same bit, which
is what lets the list decoder share these rows across paths by pointer.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .arith import APPROX, ArithModel, _f_kernel, _g_kernel
from .code import PolarCode


def active_stage(i: int, n: int) -> int:
    """Refresh bound for (1-based) bit i of an N = 2^n decode.

    Stages active_stage(i)-1 .. 0 are recomputed before deciding bit i;
    stages at or above the bound still hold valid values from earlier
    bits. Stage s contents go stale exactly when 2^s divides i-1, so the
    bound is n for i = 1 and (trailing zeros of i-1) + 1 otherwise.
    """
    if not 1 <= n:
        raise ValueError("n must be >= 1")
    if not 1 <= i <= (1 << n):
        raise ValueError(f"bit index {i} outside [1, {1 << n}]")
    if i == 1:
        return n
    return _active_stage_phi(i - 1, n)


@njit(cache=True, nogil=True, inline="always")
def _active_stage_phi(phi, n):
    if phi == 0:
        return n
    s = 0
    while not (phi >> s) & 1:
        s += 1
    return s + 1


@njit(cache=True, nogil=True, inline="always")
def _fold_partial_sums(psums, phi, u, n):
    # decided bit phi lands in the left half of one block per stage it
    # belongs to; fold it into every butterfly output it reaches there
    for s in range(n):
        if (phi >> s) & 1:
            continue
        base = 1 << s
        if phi & ((base << 1) - 1) == 0:
            for j in range(base):
                psums[base + j] = 0
        if u:
            k = phi & (base - 1)
            j = k
            while True:
                psums[base + j] ^= 1
                if j == 0:
                    break
                j = (j - 1) & k


@njit(cache=True, nogil=True, inline="always")
def _refresh_stage(dst, src, chan, psums, s, n, phi, exact):
    half = 1 << s
    is_g = (phi >> s) & 1
    if s == n - 1:
        for j in range(half):
            a0 = chan[j, 0]
            a1 = chan[j, 1]
            b0 = chan[j + half, 0]
            b1 = chan[j + half, 1]
            if is_g:
                r0, r1 = _g_kernel(a0, a1, b0, b1, psums[half + j])
            else:
                r0, r1 = _f_kernel(a0, a1, b0, b1, exact)
            dst[half + j, 0] = r0
            dst[half + j, 1] = r1
    else:
        base2 = half << 1
        for j in range(half):
            a0 = src[base2 + j, 0]
            a1 = src[base2 + j, 1]
            b0 = src[base2 + j + half, 0]
            b1 = src[base2 + j + half, 1]
            if is_g:
                r0, r1 = _g_kernel(a0, a1, b0, b1, psums[half + j])
            else:
                r0, r1 = _f_kernel(a0, a1, b0, b1, exact)
            dst[half + j, 0] = r0
            dst[half + j, 1] = r1


@njit(cache=True, nogil=True)
def _sc_kernel(chan, frozen, n, exact, u_out, ll, psums):
    n_bits = chan.shape[0]
    for phi in range(n_bits):
        top = _active_stage_phi(phi, n)
        for s in range(top - 1, -1, -1):
            _refresh_stage(ll, ll, chan, psums, s, n, phi, exact)
        if frozen[phi]:
            u = 0
        else:
            u = 1 if ll[1, 1] < ll[1, 0] else 0  # equal metrics decide 0
        u_out[phi] = u
        _fold_partial_sums(psums, phi, u, n)


def _as_chan_pairs(chan, n_bits):
    chan = np.ascontiguousarray(chan, dtype=np.float64)
    if chan.shape != (n_bits, 2):
        raise ValueError(f"expected channel pairs of shape ({n_bits}, 2)")
    return chan


def sc_decode(code: PolarCode, chan_ll, model: ArithModel = APPROX) -> np.ndarray:
    """Decode one frame of channel LL pairs; returns all N input bits."""
    chan = _as_chan_pairs(chan_ll, code.N)
    u_hat = np.empty(code.N, dtype=np.int8)
    ll = np.empty((code.N, 2), dtype=np.float64)
    psums = np.zeros(code.N, dtype=np.int8)
    _sc_kernel(chan, code._frozen_u8, code.n, model.exact, u_hat, ll, psums)
    return u_hat


def update_stage(inputs, s: int, i: int, psum_bits=None,
                 model: ArithModel = APPROX) -> np.ndarray:
    """Run stage s once for (1-based) bit i on 2^(s+1) input pairs.

    psum_bits supplies the 2^s per-node partial sums and is required
    when bit s of i-1 selects the g kernel; it is ignored for f.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    half = 1 << s
    if inputs.shape != (2 * half, 2):
        raise ValueError(f"stage {s} takes {2 * half} input pairs")
    phi = i - 1
    is_g = (phi >> s) & 1
    out = np.empty((half, 2))
    if is_g:
        if psum_bits is None:
            raise ValueError(f"stage {s} of bit {i} runs g and needs partial sums")
        psum_bits = np.asarray(psum_bits)
        if psum_bits.shape != (half,):
            raise ValueError(f"expected {half} partial-sum bits")
        for j in range(half):
            out[j] = _g_kernel(inputs[j, 0], inputs[j, 1],
                               inputs[j + half, 0], inputs[j + half, 1],
                               int(psum_bits[j]))
    else:
        for j in range(half):
            out[j] = _f_kernel(inputs[j, 0], inputs[j, 1],
                               inputs[j + half, 0], inputs[j + half, 1],
                               model.exact)
    return out


def new_partial_sums(N: int) -> np.ndarray:
    """Fresh heap-layout partial-sum memory (cell 2^s + j serves stage s)."""
    if N < 2 or N & (N - 1):
        raise ValueError("N must be a power of two >= 2")
    return np.zeros(N, dtype=np.int8)


def update_partial_sums(psums: np.ndarray, i: int, u_hat_i: int) -> None:
    """Fold (1-based) bit i's decision into the per-stage partial sums.

    Requires bits 1..i-1 to have been folded already; afterwards every
    cell a future g node reads equals the xor of the decided bits its
    butterfly position combines.
    """
    n_bits = psums.shape[0]
    n = n_bits.bit_length() - 1
    if not 1 <= i <= n_bits:
        raise ValueError(f"bit index {i} outside [1, {n_bits}]")
    if u_hat_i not in (0, 1):
        raise ValueError("decision must be 0 or 1")
    _fold_partial_sums(psums, i - 1, int(u_hat_i), n)


def partial_sum_bits(psums: np.ndarray, s: int) -> np.ndarray:
    """View of the 2^s partial-sum cells feeding stage s's g nodes."""
    half = 1 << s
    if half * 2 > psums.shape[0]:
        raise ValueError(f"stage {s} outside this memory")
    return psums[half: 2 * half]
