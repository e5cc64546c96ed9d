"""Independent reference implementations used by the tests.

Everything here is written the slow, obvious way (dense GF(2) matrix
multiplies, textbook recursion, exhaustive enumeration) and shares no
code with the package internals it checks. When a test compares the
package against one of these, agreement is evidence that both routes
are right, not that one copied the other.
"""

import numpy as np

from polarlist import (
    ListState,
    apply_selection,
    compute_metrics,
    frozen_extend,
    path_selection,
)


# ---------------------------------------------------------------------------
# transform oracle: dense matrix over GF(2)

def transform_matrix(n: int) -> np.ndarray:
    """Dense transform matrix; entry [i, j] is 1 iff j's bit support is
    contained in i's, which is the closed form of the n-fold Kronecker
    power of [[1, 0], [1, 1]]."""
    idx = np.arange(1 << n)
    return ((idx[None, :] & ~idx[:, None]) == 0).astype(np.int64)


def matrix_transform(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64)
    n = int(bits.size).bit_length() - 1
    return (bits @ transform_matrix(n)) % 2


# ---------------------------------------------------------------------------
# recursive decoder oracle (full recompute, no shared state)

def _f_pairs(a, b, exact):
    s0 = a[:, 0] + b[:, 0]
    s1 = a[:, 1] + b[:, 1]
    t0 = a[:, 1] + b[:, 0]
    t1 = a[:, 0] + b[:, 1]
    if exact:
        return np.stack((-np.logaddexp(-s0, -s1), -np.logaddexp(-t0, -t1)),
                        axis=1)
    return np.stack((np.minimum(s0, s1), np.minimum(t0, t1)), axis=1)


def _g_pairs(a, b, u):
    swapped = np.where(u[:, None] == 1, a[:, ::-1], a)
    return swapped + b


def recursive_sc(chan, frozen, exact) -> np.ndarray:
    """Textbook recursive successive decoder on negative-LL pairs.

    Splits the block in half, decodes the first half on the combined
    pairs, re-encodes it with the dense matrix to drive the second
    half. Ties decide 0.
    """
    chan = np.asarray(chan, dtype=np.float64)
    frozen = np.asarray(frozen, dtype=bool)
    n_bits = chan.shape[0]
    if n_bits == 1:
        if frozen[0]:
            return np.zeros(1, dtype=np.int8)
        bit = 0 if chan[0, 0] <= chan[0, 1] else 1
        return np.array([bit], dtype=np.int8)
    h = n_bits // 2
    a, b = chan[:h], chan[h:]
    left = recursive_sc(_f_pairs(a, b, exact), frozen[:h], exact)
    right = recursive_sc(_g_pairs(a, b, matrix_transform(left)),
                         frozen[h:], exact)
    return np.concatenate((left, right))


# ---------------------------------------------------------------------------
# exhaustive semantics: metrics as reductions over completions

def prefix_metric(chan, prefix_bits, exact) -> float:
    """Exhaustive value of a partial input vector.

    Enumerates every completion of the prefix, scores the codeword of
    each full vector as the sum of the per-position channel values, and
    reduces: min over completions in min mode, -ln of the summed
    exp(-score) in exact mode. The per-bit decision metrics of a
    successive decoder must equal this.
    """
    chan = np.asarray(chan, dtype=np.float64)
    n_bits = chan.shape[0]
    k = len(prefix_bits)
    rest = n_bits - k
    pos = np.arange(n_bits)
    scores = np.empty(1 << rest)
    u = np.empty(n_bits, dtype=np.int64)
    u[:k] = prefix_bits
    for comp in range(1 << rest):
        for t in range(rest):
            u[k + t] = (comp >> t) & 1
        x = matrix_transform(u)
        scores[comp] = chan[pos, x].sum()
    if exact:
        return float(-np.logaddexp.reduce(-scores))
    return float(scores.min())


def exhaustive_ml(frozen, chan):
    """Best codeword by brute force: min over all 2^K inputs of the
    codeword score sum(chan[j, x_j]). Returns (metric, u, x)."""
    frozen = np.asarray(frozen, dtype=bool)
    chan = np.asarray(chan, dtype=np.float64)
    n_bits = frozen.size
    info_pos = np.flatnonzero(~frozen)
    pos = np.arange(n_bits)
    best = (np.inf, None, None)
    u = np.zeros(n_bits, dtype=np.int64)
    for msg in range(1 << info_pos.size):
        for t, j in enumerate(info_pos):
            u[j] = (msg >> t) & 1
        x = matrix_transform(u)
        score = float(chan[pos, x].sum())
        if score < best[0]:
            best = (score, u.copy(), x.copy())
    return best


def brute_force_select(metrics, only_zero_bits=False):
    """Reference survivor choice: sort all 2L candidates by
    (metric, parent, bit) and keep the first L."""
    metrics = np.asarray(metrics, dtype=np.float64)
    cands = []
    for p in range(metrics.shape[0]):
        for b in (0, 1):
            m = np.inf if (only_zero_bits and b == 1) else metrics[p, b]
            cands.append((m, p, b))
    cands.sort(key=lambda t: (t[0], t[1], t[2]))
    keep = cands[: metrics.shape[0]]
    parents = np.array([c[1] for c in keep], dtype=np.int64)
    bits = np.array([c[2] for c in keep], dtype=np.int8)
    values = np.array([c[0] for c in keep])
    return parents, bits, values


# ---------------------------------------------------------------------------
# step-API driver (not an oracle; exercises the public stepping surface)

def drive_list(code, chan, L, model, watch=None):
    """Full decode through the step functions, mirroring the fused
    kernel's schedule: frozen bits extend in place except the last bit,
    which runs a masked selection. watch(state, i, metrics) is called
    after each metric computation."""
    state = ListState(code, chan, L, model)
    for i in range(1, code.N + 1):
        metrics = compute_metrics(state, i)
        if watch is not None:
            watch(state, i, metrics)
        if code.frozen[i - 1] and i < code.N:
            frozen_extend(state, i)
        else:
            parents, bits = path_selection(
                metrics, only_zero_bits=bool(code.frozen[i - 1]))
            apply_selection(state, parents, bits, i)
    return state
