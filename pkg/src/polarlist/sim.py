"""Monte-Carlo frame/bit error rate estimation.

Every frame draws its own random stream from a counter-based generator
keyed by (master seed, SNR index, frame index), so results never depend
on execution order. Frames are processed in fixed 512-frame chunks;
chunks may run on a thread pool, but aggregation walks them in index
order and applies the stopping rule between chunks. A chunk is included
if and only if, before it, the frame budget is not exhausted and the
frame-error target is not yet reached. That makes the estimate a pure
function of the config, byte-identical for any worker count.

A frame error is declared on the information bits only; frozen
positions are fixed and always decode correctly by construction.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .arith import APPROX, EXACT, ArithModel, fixed_point
from .channel import (ChannelParams, QuantConfig, add_awgn, channel_ll,
                      modulate, normalize_ll_pairs, quantize_ll)
from .code import PolarCode, encode, extract_info
from .listdec import list_decode
from .scdec import sc_decode

CHUNK_FRAMES = 512

ARITH_MODES = ("approx", "exact", "fixed")


@dataclass(frozen=True)
class SimConfig:
    """One experiment: code, decoder, arithmetic, SNR sweep, stopping
    rule, and master seed. min_errors=0 disables early stopping."""

    code: PolarCode
    decoder: str = "sc"
    L: int = 1
    arith: str = "approx"
    q_ch: int | None = None
    quant_delta: float = 1.0
    simplified_ll: bool = True
    ebn0_db: tuple = (2.0,)
    max_frames: int = 100_000
    min_errors: int = 100
    seed: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ebn0_db",
                           tuple(float(e) for e in self.ebn0_db))
        if self.decoder not in ("sc", "list"):
            raise ValueError("decoder must be 'sc' or 'list'")
        if self.decoder == "list" and self.L < 1:
            raise ValueError("list size must be >= 1")
        if self.arith not in ARITH_MODES:
            raise ValueError(f"arith must be one of {ARITH_MODES}")
        if self.arith == "fixed" and self.q_ch is None:
            raise ValueError("fixed-point arithmetic requires q_ch")
        if len(self.ebn0_db) == 0:
            raise ValueError("SNR list must be non-empty")
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.min_errors < 0:
            raise ValueError("min_errors must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")

    def model(self) -> ArithModel:
        if self.arith == "exact":
            return EXACT
        if self.arith == "approx":
            return APPROX
        return fixed_point(self.q_ch, self.code.n)

    def to_dict(self) -> dict:
        """JSON-friendly view (code reduced to its parameters)."""
        return {
            "N": self.code.N,
            "K": self.code.K,
            "frozen": "".join("1" if f else "0" for f in self.code.frozen),
            "decoder": self.decoder,
            "L": self.L,
            "arith": self.arith,
            "q_ch": self.q_ch,
            "quant_delta": self.quant_delta,
            "simplified_ll": self.simplified_ll,
            "ebn0_db": list(self.ebn0_db),
            "max_frames": self.max_frames,
            "min_errors": self.min_errors,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class FerPoint:
    ebn0_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    fer: float
    ber: float
    stderr_fer: float

    @classmethod
    def from_counts(cls, ebn0_db, frames, frame_errors, bit_errors, k):
        fer = frame_errors / frames
        return cls(ebn0_db=float(ebn0_db), frames=int(frames),
                   frame_errors=int(frame_errors), bit_errors=int(bit_errors),
                   fer=fer, ber=bit_errors / (frames * k),
                   stderr_fer=math.sqrt(fer * (1.0 - fer) / frames))


class _FrameRunner:
    """Per-SNR decode worker. Stateless across calls: every frame builds
    its own generator, so chunks can run concurrently."""

    def __init__(self, cfg: SimConfig, ebn0_db: float):
        self.cfg = cfg
        self.code = cfg.code
        self.params = ChannelParams.from_ebn0_db(ebn0_db, cfg.code.rate)
        self.model = cfg.model()
        self.quant = (QuantConfig(cfg.q_ch, cfg.quant_delta)
                      if cfg.arith == "fixed" else None)

    def run_chunk(self, snr_index: int, start_frame: int, n_frames: int):
        cfg = self.cfg
        code = self.code
        k = code.K
        frame_errors = 0
        bit_errors = 0
        for f in range(start_frame, start_frame + n_frames):
            seq = np.random.SeedSequence((cfg.seed, snr_index, f))
            rng = np.random.Generator(np.random.Philox(seq))
            info = rng.integers(0, 2, size=k, dtype=np.int8)
            x = encode(code, info)
            y = add_awgn(modulate(x), self.params, rng)
            ll = channel_ll(y, self.params, simplified=cfg.simplified_ll)
            if self.quant is not None:
                ll = quantize_ll(normalize_ll_pairs(ll), self.quant)
            if cfg.decoder == "sc":
                u_hat = sc_decode(code, ll, self.model)
            else:
                u_hat = list_decode(code, ll, cfg.L, self.model)
            nbad = int(np.count_nonzero(extract_info(code, u_hat) != info))
            if nbad:
                frame_errors += 1
                bit_errors += nbad
        return frame_errors, bit_errors


def _chunk_plan(max_frames: int):
    """Fixed chunk boundaries: [0,512), [512,1024), ... clipped at
    max_frames. The plan depends only on max_frames."""
    plan = []
    start = 0
    while start < max_frames:
        n = min(CHUNK_FRAMES, max_frames - start)
        plan.append((start, n))
        start += n
    return plan


def run_point(cfg: SimConfig, ebn0_db: float, jobs: int | None = None,
              _runner_factory=None) -> FerPoint:
    """Estimate FER/BER at one sweep point (ebn0_db must be a member of
    cfg.ebn0_db; its index keys the random streams)."""
    ebn0_db = float(ebn0_db)
    try:
        snr_index = cfg.ebn0_db.index(ebn0_db)
    except ValueError:
        raise ValueError(f"{ebn0_db} dB is not in the configured sweep")
    jobs = max(1, int(jobs) if jobs else (os.cpu_count() or 1))
    runner = (_runner_factory or _FrameRunner)(cfg, ebn0_db)
    plan = _chunk_plan(cfg.max_frames)

    frames = frame_errors = bit_errors = 0

    def hit_target():
        return cfg.min_errors > 0 and frame_errors >= cfg.min_errors

    if jobs == 1:
        for start, n in plan:
            if hit_target():
                break
            fe, be = runner.run_chunk(snr_index, start, n)
            frames += n
            frame_errors += fe
            bit_errors += be
    else:
        # speculative execution: keep a window of chunks in flight, but
        # fold results in plan order so the stopping rule sees exactly
        # the sequential prefix
        window = 2 * jobs
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {}
            submitted = 0
            cursor = 0
            while cursor < len(plan):
                if hit_target():
                    break
                while submitted < len(plan) and submitted - cursor < window:
                    start, n = plan[submitted]
                    futures[submitted] = pool.submit(
                        runner.run_chunk, snr_index, start, n)
                    submitted += 1
                fe, be = futures.pop(cursor).result()
                frames += plan[cursor][1]
                frame_errors += fe
                bit_errors += be
                cursor += 1
            for fut in futures.values():
                fut.cancel()
    return FerPoint.from_counts(ebn0_db, frames, frame_errors, bit_errors,
                                cfg.code.K)


def run_sweep(cfg: SimConfig, jobs: int | None = None,
              _runner_factory=None) -> list[FerPoint]:
    """run_point at every configured SNR, in sweep order."""
    return [run_point(cfg, e, jobs=jobs, _runner_factory=_runner_factory)
            for e in cfg.ebn0_db]


CSV_COLUMNS = ("ebn0_db", "frames", "frame_errors", "fer", "stderr_fer", "ber")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def write_csv(points, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for p in points:
            w.writerow([_fmt(getattr(p, c)) for c in CSV_COLUMNS])


def write_json(points, path, manifest: dict | None = None) -> None:
    doc = {"points": [asdict(p) for p in points]}
    if manifest is not None:
        doc["manifest"] = manifest
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
