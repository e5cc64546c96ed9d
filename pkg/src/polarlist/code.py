"""Polar code definition, reliability-based construction, and encoding.

A code is a blocklength N = 2^n and a frozen mask over the N synthetic
input positions. Construction ranks the positions by a per-position
reliability figure (exact erasure-probability recursion on a BEC proxy,
or Gaussian-approximation density evolution for BPSK/AWGN) and freezes
the N - K least reliable ones. Rankings depend only on (N, method,
design parameter), so frozen sets for the same channel nest in K.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

BHATTACHARYYA_BEC = "bhattacharyya-bec"
GAUSSIAN_APPROX = "gaussian-approx-awgn"

_METHOD_ALIASES = {
    "bhattacharyya-bec": BHATTACHARYYA_BEC,
    "bec": BHATTACHARYYA_BEC,
    "gaussian-approx-awgn": GAUSSIAN_APPROX,
    "gaussian-approx": GAUSSIAN_APPROX,
    "ga": GAUSSIAN_APPROX,
}


class PolarCode:
    """Immutable (N, K) code given by its frozen-position mask."""

    def __init__(self, frozen_mask):
        frozen = np.array(frozen_mask, dtype=bool)
        if frozen.ndim != 1:
            raise ValueError("frozen mask must be one-dimensional")
        n_bits = frozen.size
        if n_bits < 2 or n_bits & (n_bits - 1):
            raise ValueError(f"blocklength {n_bits} is not a power of two >= 2")
        k = int(n_bits - np.count_nonzero(frozen))
        if k < 1:
            raise ValueError("at least one information position is required")
        frozen.flags.writeable = False
        self._frozen = frozen
        self._frozen_u8 = np.ascontiguousarray(frozen, dtype=np.uint8)
        self._info_idx = np.flatnonzero(~frozen)
        self._info_idx.flags.writeable = False
        self.N = n_bits
        self.n = n_bits.bit_length() - 1
        self.K = k

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def frozen(self) -> np.ndarray:
        return self._frozen

    @property
    def info_indices(self) -> np.ndarray:
        return self._info_idx

    @property
    def frozen_indices(self) -> np.ndarray:
        return np.flatnonzero(self._frozen)

    def __repr__(self):
        return f"PolarCode(N={self.N}, K={self.K})"


def _bec_bhattacharyya(n: int, eps: float) -> np.ndarray:
    # exact erasure probabilities of the synthetic channels; position 2k
    # takes the degraded branch, 2k+1 the upgraded one
    z = np.array([eps], dtype=np.float64)
    for _ in range(n):
        out = np.empty(z.size * 2)
        out[0::2] = 2.0 * z - z * z
        out[1::2] = z * z
        z = out
    return z


# Gaussian-approximation transfer function (log domain to survive the
# doubling of LLR means across stages).

def _ln_phi(x):
    x = np.asarray(x, dtype=np.float64)
    small = x < 10.0
    out = np.empty_like(x)
    xs = np.where(small, x, 1.0)
    out[small] = (-0.4527 * xs**0.86 + 0.0218)[small]
    xl = np.where(small, 10.0, x)
    out[~small] = (0.5 * np.log(np.pi / xl) - xl / 4.0
                   + np.log1p(-10.0 / (7.0 * xl)))[~small]
    return out


def _ln_phi_inv(t):
    t = np.asarray(t, dtype=np.float64)
    lo = np.full_like(t, 1e-12)
    hi = np.ones_like(t)
    for _ in range(80):
        need = _ln_phi(hi) > t
        if not need.any():
            break
        hi[need] *= 2.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        right = _ln_phi(mid) > t
        lo = np.where(right, mid, lo)
        hi = np.where(right, hi, mid)
    return 0.5 * (lo + hi)


def _ga_means(n: int, mean0: float) -> np.ndarray:
    m = np.array([mean0], dtype=np.float64)
    for _ in range(n):
        t = _ln_phi(m)
        worse = _ln_phi_inv(t + np.log(2.0 - np.exp(t)))
        out = np.empty(m.size * 2)
        out[0::2] = worse
        out[1::2] = 2.0 * m
        m = out
    return m


def construct_frozen_set(N: int, K: int, method: str = GAUSSIAN_APPROX,
                         design_param: float = 2.0) -> PolarCode:
    """Build an (N, K) code by freezing the N - K least reliable positions.

    design_param is the erasure probability for the BEC ranking and the
    design Eb/N0 in dB (rate-normalized with R = K/N) for the Gaussian
    approximation. Ties rank lower indices as less reliable, so results
    are deterministic and nested across K.
    """
    if N < 2 or N & (N - 1):
        raise ValueError(f"N={N} is not a power of two >= 2")
    if not 1 <= K <= N:
        raise ValueError(f"K={K} outside [1, {N}]")
    canon = _METHOD_ALIASES.get(method)
    if canon is None:
        raise ValueError(f"unknown construction method {method!r}")
    n = N.bit_length() - 1
    if canon == BHATTACHARYYA_BEC:
        if not 0.0 < design_param < 1.0:
            raise ValueError("erasure probability must be in (0, 1)")
        badness = _bec_bhattacharyya(n, float(design_param))
    else:
        rate = K / N
        sigma_sq = 1.0 / (2.0 * rate * 10.0 ** (design_param / 10.0))
        badness = -_ga_means(n, 2.0 / sigma_sq)
    order = np.argsort(-badness, kind="stable")  # least reliable first
    frozen = np.zeros(N, dtype=bool)
    frozen[order[: N - K]] = True
    return PolarCode(frozen)


@njit(cache=True, nogil=True)
def _butterfly(x):
    n_bits = x.size
    half = 1
    while half < n_bits:
        step = half * 2
        for start in range(0, n_bits, step):
            for j in range(start, start + half):
                x[j] ^= x[j + half]
        half = step


def polar_transform(bits) -> np.ndarray:
    """Apply the n-stage xor butterfly. The transform is its own inverse."""
    x = np.array(bits, dtype=np.int8)
    if x.size < 1 or x.size & (x.size - 1):
        raise ValueError("length must be a power of two")
    if np.any((x != 0) & (x != 1)):
        raise ValueError("bits must be 0/1")
    _butterfly(x)
    return x


def encode(code: PolarCode, info_bits) -> np.ndarray:
    """Map K information bits to the N-bit codeword."""
    info = np.asarray(info_bits, dtype=np.int8)
    if info.shape != (code.K,):
        raise ValueError(f"expected {code.K} information bits, got {info.shape}")
    if np.any((info != 0) & (info != 1)):
        raise ValueError("bits must be 0/1")
    u = np.zeros(code.N, dtype=np.int8)
    u[code.info_indices] = info
    _butterfly(u)
    return u


def extract_info(code: PolarCode, u_hat) -> np.ndarray:
    """Pull the information bits out of a decoded input vector."""
    u_hat = np.asarray(u_hat)
    if u_hat.shape != (code.N,):
        raise ValueError("length mismatch")
    return u_hat[code.info_indices].astype(np.int8)


def save_frozen_set(code: PolarCode, path) -> None:
    """Write a frozen-set file: a header line "N K", then N mask chars.

    '1' marks a frozen position, '0' an information position.
    """
    mask = "".join("1" if f else "0" for f in code.frozen)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{code.N} {code.K}\n{mask}\n")


def load_frozen_set(path) -> PolarCode:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        mask_line = fh.readline().strip()
    if len(header) != 2:
        raise ValueError(f"{path}: malformed header")
    n_bits, k = int(header[0]), int(header[1])
    if len(mask_line) != n_bits or set(mask_line) - {"0", "1"}:
        raise ValueError(f"{path}: mask line must be {n_bits} chars of 0/1")
    code = PolarCode([c == "1" for c in mask_line])
    if code.K != k:
        raise ValueError(f"{path}: header says K={k}, mask has K={code.K}")
    return code
