"""List decoding with pointer-shared likelihood memories.

The decoder tracks up to L candidate paths. Each path owns one N-row
stage memory (heap layout as in scdec) and one partial-sum memory, but
a path's stage-s rows may live in *another* path's memory: pointers[l, s]
names the memory whose stage-s rows currently hold path l's values.
Duplicating a path copies its pointer row, partial sums, and decided
bits; the likelihood rows themselves are never copied. This is sound
because every path refreshes the same stages at the same bit, so by the
time a memory's stage rows are overwritten, no pointer references their
old contents. The received channel pairs are stored once and shared.

Candidate selection flattens the L x 2 child metrics, stable-sorts, and
keeps the L smallest, so ties resolve by (metric, parent, bit) and the
surviving slots are ordered best-first; after the final bit the winner
is slot 0. Decoding starts from a single active path; inactive slots
carry saturated (+inf) metrics, so selection grows the list naturally.
A frozen bit extends every path with 0 and skips selection, except at
the last bit where selection still runs (restricted to the valid
bit-0 children) to order the survivors.

reference_list_decode is the plain-copy variant kept as an oracle: same
contract, but duplication copies whole stage memories and no pointers
exist. Both decoders fill an optional ListTrace identically (metrics,
parents, bits, selection flags), which is what the trace tests compare.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .arith import APPROX, ArithModel
from .code import PolarCode
from .scdec import _active_stage_phi, _fold_partial_sums, _refresh_stage, active_stage


@njit(cache=True, nogil=True)
def _compute_metrics_kernel(chan, li, ptrs, psums, active, metrics, phi, n, exact):
    n_paths = li.shape[0]
    top = _active_stage_phi(phi, n)
    for l in range(n_paths):
        if not active[l]:
            metrics[l, 0] = np.inf
            metrics[l, 1] = np.inf
            continue
        for s in range(top - 1, -1, -1):
            if s + 1 < n:
                src = li[ptrs[l, s + 1]]
            else:
                src = li[l]  # unused, stage n reads the shared channel
            _refresh_stage(li[l], src, chan, psums[l], s, n, phi, exact)
            ptrs[l, s] = l
        metrics[l, 0] = li[l, 1, 0]
        metrics[l, 1] = li[l, 1, 1]


@njit(cache=True, nogil=True)
def _selection_kernel(metrics, only_zero_bits, parents, bits, sel_metrics):
    n_paths = metrics.shape[0]
    flat = np.empty(2 * n_paths, dtype=np.float64)
    for l in range(n_paths):
        flat[2 * l] = metrics[l, 0]
        flat[2 * l + 1] = np.inf if only_zero_bits else metrics[l, 1]
    order = np.argsort(flat, kind="mergesort")  # stable: ties by (parent, bit)
    if not np.isfinite(flat[order[0]]):
        raise RuntimeError("path selection found no finite candidate")
    for l in range(n_paths):
        c = order[l]
        parents[l] = c >> 1
        bits[l] = c & 1
        sel_metrics[l] = flat[c]


@njit(cache=True, nogil=True)
def _apply_selection_kernel(ptrs, psums, paths, active, parents, bits,
                            sel_metrics, path_metrics, phi, n,
                            scr_ptr, scr_ps, scr_pa):
    n_paths = ptrs.shape[0]
    n_stages = ptrs.shape[1]
    n_pos = psums.shape[1]
    # crossbar semantics: read every parent row before writing any slot;
    # element loops, not slice assignment, so the copies vectorize
    for l in range(n_paths):
        p = parents[l]
        for j in range(n_stages):
            scr_ptr[l, j] = ptrs[p, j]
        for j in range(n_pos):
            scr_ps[l, j] = psums[p, j]
            scr_pa[l, j] = paths[p, j]
    for l in range(n_paths):
        for j in range(n_stages):
            ptrs[l, j] = scr_ptr[l, j]
        for j in range(n_pos):
            psums[l, j] = scr_ps[l, j]
            paths[l, j] = scr_pa[l, j]
        m = sel_metrics[l]
        path_metrics[l] = m
        if np.isfinite(m):
            active[l] = True
            paths[l, phi] = bits[l]
            _fold_partial_sums(psums[l], phi, bits[l], n)
        else:
            active[l] = False


@njit(cache=True, nogil=True)
def _frozen_extend_kernel(psums, paths, active, metrics, path_metrics, phi, n):
    n_paths = psums.shape[0]
    for l in range(n_paths):
        if active[l]:
            paths[l, phi] = 0
            _fold_partial_sums(psums[l], phi, 0, n)
            path_metrics[l] = metrics[l, 0]


@njit(cache=True, nogil=True)
def _list_kernel(chan, frozen, n, exact, li, ptrs, psums, paths, active,
                 metrics, path_metrics, parents, bits, sel_metrics,
                 scr_ptr, scr_ps, scr_pa,
                 tr_metrics, tr_parents, tr_bits, tr_ptrs, tr_sel, use_trace):
    n_bits = chan.shape[0]
    n_paths = li.shape[0]
    for phi in range(n_bits):
        _compute_metrics_kernel(chan, li, ptrs, psums, active, metrics,
                                phi, n, exact)
        if use_trace:
            for l in range(n_paths):
                tr_metrics[phi, l, 0] = metrics[l, 0]
                tr_metrics[phi, l, 1] = metrics[l, 1]
                for s in range(n):
                    tr_ptrs[phi, l, s] = ptrs[l, s]
        if frozen[phi] and phi < n_bits - 1:
            _frozen_extend_kernel(psums, paths, active, metrics, path_metrics,
                                  phi, n)
            if use_trace:
                tr_sel[phi] = False
                for l in range(n_paths):
                    tr_parents[phi, l] = l
                    tr_bits[phi, l] = 0
        else:
            _selection_kernel(metrics, frozen[phi] == 1, parents, bits,
                              sel_metrics)
            _apply_selection_kernel(ptrs, psums, paths, active, parents, bits,
                                    sel_metrics, path_metrics, phi, n,
                                    scr_ptr, scr_ps, scr_pa)
            if use_trace:
                tr_sel[phi] = True
                for l in range(n_paths):
                    tr_parents[phi, l] = parents[l]
                    tr_bits[phi, l] = bits[l]


@njit(cache=True, nogil=True)
def _ref_compute_metrics_kernel(chan, li, psums, active, metrics, phi, n, exact):
    n_paths = li.shape[0]
    top = _active_stage_phi(phi, n)
    for l in range(n_paths):
        if not active[l]:
            metrics[l, 0] = np.inf
            metrics[l, 1] = np.inf
            continue
        for s in range(top - 1, -1, -1):
            _refresh_stage(li[l], li[l], chan, psums[l], s, n, phi, exact)
        metrics[l, 0] = li[l, 1, 0]
        metrics[l, 1] = li[l, 1, 1]


@njit(cache=True, nogil=True)
def _ref_apply_kernel(li, psums, paths, active, parents, bits, sel_metrics,
                      path_metrics, phi, n, scr_li, scr_ps, scr_pa):
    n_paths = li.shape[0]
    n_pos = psums.shape[1]
    for l in range(n_paths):
        p = parents[l]
        for j in range(n_pos):
            scr_li[l, j, 0] = li[p, j, 0]
            scr_li[l, j, 1] = li[p, j, 1]
            scr_ps[l, j] = psums[p, j]
            scr_pa[l, j] = paths[p, j]
    for l in range(n_paths):
        for j in range(n_pos):
            li[l, j, 0] = scr_li[l, j, 0]
            li[l, j, 1] = scr_li[l, j, 1]
            psums[l, j] = scr_ps[l, j]
            paths[l, j] = scr_pa[l, j]
        m = sel_metrics[l]
        path_metrics[l] = m
        if np.isfinite(m):
            active[l] = True
            paths[l, phi] = bits[l]
            _fold_partial_sums(psums[l], phi, bits[l], n)
        else:
            active[l] = False


@njit(cache=True, nogil=True)
def _ref_kernel(chan, frozen, n, exact, li, psums, paths, active,
                metrics, path_metrics, parents, bits, sel_metrics,
                scr_li, scr_ps, scr_pa,
                tr_metrics, tr_parents, tr_bits, tr_sel, use_trace):
    n_bits = chan.shape[0]
    n_paths = li.shape[0]
    for phi in range(n_bits):
        _ref_compute_metrics_kernel(chan, li, psums, active, metrics, phi, n,
                                    exact)
        if use_trace:
            for l in range(n_paths):
                tr_metrics[phi, l, 0] = metrics[l, 0]
                tr_metrics[phi, l, 1] = metrics[l, 1]
        if frozen[phi] and phi < n_bits - 1:
            _frozen_extend_kernel(psums, paths, active, metrics, path_metrics,
                                  phi, n)
            if use_trace:
                tr_sel[phi] = False
                for l in range(n_paths):
                    tr_parents[phi, l] = l
                    tr_bits[phi, l] = 0
        else:
            _selection_kernel(metrics, frozen[phi] == 1, parents, bits,
                              sel_metrics)
            _ref_apply_kernel(li, psums, paths, active, parents, bits,
                              sel_metrics, path_metrics, phi, n,
                              scr_li, scr_ps, scr_pa)
            if use_trace:
                tr_sel[phi] = True
                for l in range(n_paths):
                    tr_parents[phi, l] = parents[l]
                    tr_bits[phi, l] = bits[l]


class ListTrace:
    """Per-bit decode record: candidate metrics, selected parents/bits,
    selection flags, and (pointer decoder only) post-refresh pointer rows.
    Pass an instance to list_decode/reference_list_decode to fill it."""

    __slots__ = ("metrics", "parents", "bits", "pointers", "selected")

    def __init__(self):
        self.metrics = None
        self.parents = None
        self.bits = None
        self.pointers = None
        self.selected = None

    def _alloc(self, n_bits, n_paths, n, with_pointers):
        self.metrics = np.empty((n_bits, n_paths, 2), dtype=np.float64)
        self.parents = np.empty((n_bits, n_paths), dtype=np.int64)
        self.bits = np.empty((n_bits, n_paths), dtype=np.int8)
        self.selected = np.zeros(n_bits, dtype=np.bool_)
        if with_pointers:
            self.pointers = np.empty((n_bits, n_paths, n), dtype=np.int64)
        else:
            self.pointers = None


def format_trace(trace: ListTrace) -> str:
    """Line-oriented text dump, one line per bit index."""
    if trace.metrics is None:
        raise ValueError("trace has not been filled by a decode")
    n_bits, n_paths, _ = trace.metrics.shape
    lines = []
    for phi in range(n_bits):
        m = " ".join(f"{trace.metrics[phi, l, 0]:.9g}/{trace.metrics[phi, l, 1]:.9g}"
                     for l in range(n_paths))
        fields = [f"i={phi + 1}", f"sel={int(trace.selected[phi])}",
                  "m=" + m,
                  "parents=" + ",".join(str(int(p)) for p in trace.parents[phi]),
                  "bits=" + ",".join(str(int(b)) for b in trace.bits[phi])]
        if trace.pointers is not None:
            fields.append("ptrs=" + "|".join(
                ",".join(str(int(v)) for v in trace.pointers[phi, l])
                for l in range(n_paths)))
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


class ListState:
    """Mutable decoder state for stepping a list decode bit by bit.

    Mirrors what the fused kernel keeps internally; the step functions
    below (compute_metrics, path_selection, apply_selection,
    frozen_extend) operate on it through the same compiled kernels.
    ll_writes counts likelihood-pair writes and only ever grows during
    metric computation: duplication writes none.
    """

    def __init__(self, code: PolarCode, chan_ll, L: int,
                 model: ArithModel = APPROX):
        if L < 1:
            raise ValueError("list size must be >= 1")
        chan = np.ascontiguousarray(chan_ll, dtype=np.float64)
        if chan.shape != (code.N, 2):
            raise ValueError(f"expected channel pairs of shape ({code.N}, 2)")
        self.code = code
        self.model = model
        self.n = code.n
        self.N = code.N
        self.L = int(L)
        self.chan = chan
        self.li = np.zeros((L, code.N, 2), dtype=np.float64)
        self.pointers = np.zeros((L, code.n), dtype=np.int64)
        self.psums = np.zeros((L, code.N), dtype=np.int8)
        self.paths = np.zeros((L, code.N), dtype=np.int8)
        self.metrics = np.full((L, 2), np.inf)
        self.path_metrics = np.full(L, np.inf)
        self.path_metrics[0] = 0.0
        self.active = np.zeros(L, dtype=np.bool_)
        self.active[0] = True
        self.ll_writes = 0


def compute_metrics(state: ListState, i: int) -> np.ndarray:
    """Refresh stages active_stage(i)-1..0 of every active path and
    capture the two child metrics per path ((1-based) bit i)."""
    top = active_stage(i, state.n)
    _compute_metrics_kernel(state.chan, state.li, state.pointers, state.psums,
                            state.active, state.metrics, i - 1, state.n,
                            state.model.exact)
    state.ll_writes += int(np.count_nonzero(state.active)) * ((1 << top) - 1)
    return state.metrics.copy()


def path_selection(metrics, only_zero_bits: bool = False):
    """Keep the L smallest of the 2L candidates.

    Returns (parents, bits) ordered best metric first; ties resolve by
    parent index then bit value. With only_zero_bits the bit-1 children
    are excluded (used when the final bit is frozen)."""
    metrics = np.ascontiguousarray(metrics, dtype=np.float64)
    if metrics.ndim != 2 or metrics.shape[1] != 2:
        raise ValueError("metrics must be L x 2")
    n_paths = metrics.shape[0]
    parents = np.empty(n_paths, dtype=np.int64)
    bits = np.empty(n_paths, dtype=np.int8)
    sel = np.empty(n_paths, dtype=np.float64)
    _selection_kernel(metrics, only_zero_bits, parents, bits, sel)
    return parents, bits


def apply_selection(state: ListState, parents, bits, i: int) -> None:
    """Install the survivors: copy pointer rows, partial sums, and path
    bits per parent (all reads before writes), then record bit i and
    fold it into each survivor's partial sums. Likelihood rows are not
    touched."""
    parents = np.asarray(parents, dtype=np.int64)
    bits = np.asarray(bits, dtype=np.int8)
    if parents.shape != (state.L,) or bits.shape != (state.L,):
        raise ValueError(f"need {state.L} parents and bits")
    if parents.min() < 0 or parents.max() >= state.L:
        raise ValueError("parent index out of range")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0/1")
    sel_metrics = state.metrics[parents, bits].astype(np.float64)
    scr_ptr = np.empty_like(state.pointers)
    scr_ps = np.empty_like(state.psums)
    scr_pa = np.empty_like(state.paths)
    _apply_selection_kernel(state.pointers, state.psums, state.paths,
                            state.active, parents, bits, sel_metrics,
                            state.path_metrics, i - 1, state.n,
                            scr_ptr, scr_ps, scr_pa)


def frozen_extend(state: ListState, i: int) -> None:
    """Extend every active path with the frozen value 0; no selection."""
    _frozen_extend_kernel(state.psums, state.paths, state.active,
                          state.metrics, state.path_metrics, i - 1, state.n)


def _alloc_trace_arrays(trace, n_bits, n_paths, n, with_pointers):
    if trace is None:
        tm = np.empty((0, 0, 2))
        tp = np.empty((0, 0), dtype=np.int64)
        tb = np.empty((0, 0), dtype=np.int8)
        tq = np.empty((0, 0, 0), dtype=np.int64)
        ts = np.empty(0, dtype=np.bool_)
        return False, tm, tp, tb, tq, ts
    trace._alloc(n_bits, n_paths, n, with_pointers)
    tq = trace.pointers if with_pointers else np.empty((0, 0, 0), dtype=np.int64)
    return True, trace.metrics, trace.parents, trace.bits, tq, trace.selected


def list_decode(code: PolarCode, chan_ll, L: int, model: ArithModel = APPROX,
                trace: ListTrace | None = None) -> np.ndarray:
    """Pointer-sharing list decode; returns the best path's N input bits.

    Fixed-point models expect already-quantized channel pairs. Passing a
    ListTrace records the per-bit metrics/selections for inspection.
    """
    state = ListState(code, chan_ll, L, model)
    parents = np.empty(state.L, dtype=np.int64)
    bits = np.empty(state.L, dtype=np.int8)
    sel = np.empty(state.L, dtype=np.float64)
    scr_ptr = np.empty_like(state.pointers)
    scr_ps = np.empty_like(state.psums)
    scr_pa = np.empty_like(state.paths)
    use_trace, tm, tp, tb, tq, ts = _alloc_trace_arrays(
        trace, code.N, state.L, code.n, with_pointers=True)
    _list_kernel(state.chan, code._frozen_u8, code.n, model.exact,
                 state.li, state.pointers, state.psums, state.paths,
                 state.active, state.metrics, state.path_metrics,
                 parents, bits, sel, scr_ptr, scr_ps, scr_pa,
                 tm, tp, tb, tq, ts, use_trace)
    return state.paths[0].copy()


def reference_list_decode(code: PolarCode, chan_ll, L: int,
                          model: ArithModel = APPROX,
                          trace: ListTrace | None = None) -> np.ndarray:
    """Copy-based list decode (no pointers; duplication copies whole
    stage memories). Same contract and output as list_decode; kept as
    the equivalence oracle."""
    if L < 1:
        raise ValueError("list size must be >= 1")
    chan = np.ascontiguousarray(chan_ll, dtype=np.float64)
    if chan.shape != (code.N, 2):
        raise ValueError(f"expected channel pairs of shape ({code.N}, 2)")
    L = int(L)
    li = np.zeros((L, code.N, 2), dtype=np.float64)
    psums = np.zeros((L, code.N), dtype=np.int8)
    paths = np.zeros((L, code.N), dtype=np.int8)
    metrics = np.full((L, 2), np.inf)
    path_metrics = np.full(L, np.inf)
    path_metrics[0] = 0.0
    active = np.zeros(L, dtype=np.bool_)
    active[0] = True
    parents = np.empty(L, dtype=np.int64)
    bits = np.empty(L, dtype=np.int8)
    sel = np.empty(L, dtype=np.float64)
    scr_li = np.empty_like(li)
    scr_ps = np.empty_like(psums)
    scr_pa = np.empty_like(paths)
    use_trace, tm, tp, tb, _tq, ts = _alloc_trace_arrays(
        trace, code.N, L, code.n, with_pointers=False)
    _ref_kernel(chan, code._frozen_u8, code.n, model.exact,
                li, psums, paths, active, metrics, path_metrics,
                parents, bits, sel, scr_li, scr_ps, scr_pa,
                tm, tp, tb, ts, use_trace)
    return paths[0].copy()
