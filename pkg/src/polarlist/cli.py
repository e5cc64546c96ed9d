"""Command-line front end.

Subcommands: construct (frozen-set files), decode (single frame from a
file of received symbols), fer (Monte-Carlo sweeps to CSV/JSON plus a
rendered figure), hwreport (hardware cost model).

Exit codes: 0 success, 2 usage errors, 1 runtime errors. The master
seed comes from --seed, else the POLARLIST_SEED environment variable,
else 1. For the fer subcommand a JSON config file can supply any
long-form option; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .channel import QuantConfig, channel_ll, normalize_ll_pairs, quantize_ll
from .code import (BHATTACHARYYA_BEC, GAUSSIAN_APPROX, PolarCode,
                   construct_frozen_set, extract_info, load_frozen_set,
                   save_frozen_set)
from .hwmodel import HwConfig, format_report, report
from .listdec import ListTrace, format_trace, list_decode
from .scdec import sc_decode
from .sim import SimConfig, run_sweep, write_csv, write_json


@dataclass(frozen=True)
class RunManifest:
    """Record written next to every set of result files."""

    command: str
    version: str
    timestamp: str
    config: dict
    outputs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _resolve_seed(flag_value) -> int:
    if flag_value is not None:
        return int(flag_value)
    env = os.environ.get("POLARLIST_SEED")
    if env is not None and env != "":
        return int(env)
    return 1


def _parse_snrs(text: str) -> list:
    """Either 'start:step:stop' (inclusive of stop within rounding) or
    a comma-separated list of dB values."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("SNR range must be start:step:stop")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("SNR step must be positive")
        vals = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + 1e-9:
                break
            vals.append(round(v, 10))
            k += 1
        if not vals:
            raise ValueError("empty SNR range")
        return vals
    return [float(p) for p in text.split(",") if p.strip() != ""]


def _parse_int_list(text: str) -> list:
    return [int(p) for p in str(text).split(",") if p.strip() != ""]


def _method_name(method: str) -> str:
    m = method.lower()
    if m in ("ga", "gaussian-approx", GAUSSIAN_APPROX):
        return GAUSSIAN_APPROX
    if m in ("bec", BHATTACHARYYA_BEC):
        return BHATTACHARYYA_BEC
    raise ValueError(f"unknown construction method: {method}")


def _build_code(n, k, method, design_snr, eps) -> PolarCode:
    name = _method_name(method)
    param = eps if name == BHATTACHARYYA_BEC else design_snr
    return construct_frozen_set(n, k, method=name, design_param=param)


def cmd_construct(args) -> int:
    code = _build_code(args.n, args.k, args.method, args.design_snr, args.eps)
    out = args.out or f"frozen_n{code.N}_k{code.K}.txt"
    save_frozen_set(code, out)
    print(f"N={code.N} K={code.K} rate={code.rate:g} "
          f"method={_method_name(args.method)} -> {out}")
    return 0


def cmd_decode(args) -> int:
    code = load_frozen_set(args.frozen)
    y = np.loadtxt(args.yfile, dtype=np.float64).ravel()
    if y.size != code.N:
        raise ValueError(f"expected {code.N} received symbols, got {y.size}")
    ll = channel_ll(y)
    if args.arith == "fixed":
        if args.qch is None:
            raise ValueError("--arith fixed requires --qch")
        from .arith import fixed_point
        model = fixed_point(args.qch, code.n)
        ll = quantize_ll(normalize_ll_pairs(ll), QuantConfig(args.qch, args.qdelta))
    elif args.arith == "exact":
        from .arith import EXACT as model
    else:
        from .arith import APPROX as model
    if args.sc and args.list_size is not None:
        raise ValueError("choose one of --sc / --list")
    if args.list_size is not None:
        trace = ListTrace() if args.trace else None
        u_hat = list_decode(code, ll, args.list_size, model, trace=trace)
        if args.trace:
            with open(args.trace, "w") as fh:
                fh.write(format_trace(trace))
    else:
        if args.trace:
            raise ValueError("--trace requires --list")
        u_hat = sc_decode(code, ll, model)
    print("".join(str(int(b)) for b in extract_info(code, u_hat)))
    return 0


_FER_DEFAULTS = {
    "n": 1024,
    "k": 512,
    "method": "ga",
    "design_snr": 2.0,
    "eps": 0.5,
    "frozen": None,
    "snrs": "1.0:0.5:3.0",
    "list": "1",
    "arith": "approx",
    "qch": None,
    "float_baseline": False,
    "quant_delta": 1.0,
    "max_frames": 100_000,
    "min_errors": 100,
    "out_dir": ".",
    "prefix": "fer",
    "no_plot": False,
    "seed": None,
    "jobs": None,
}


def _fer_setting(args, config: dict, key: str):
    flag = getattr(args, key)
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return _FER_DEFAULTS[key]


def cmd_fer(args) -> int:
    config = {}
    if args.config:
        with open(args.config) as fh:
            config = json.load(fh)
        unknown = set(config) - set(_FER_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    get = lambda key: _fer_setting(args, config, key)  # noqa: E731

    frozen_file = get("frozen")
    if frozen_file:
        code = load_frozen_set(frozen_file)
    else:
        code = _build_code(int(get("n")), int(get("k")), get("method"),
                           float(get("design_snr")), float(get("eps")))
    snrs = _parse_snrs(str(get("snrs")))
    l_values = _parse_int_list(get("list"))
    if not l_values:
        raise ValueError("--list must name at least one list size")
    qch_raw = get("qch")
    qch_list = _parse_int_list(qch_raw) if qch_raw not in (None, "") else []
    arith = str(get("arith"))
    seed = _resolve_seed(get("seed"))
    jobs = get("jobs")
    out_dir = str(get("out_dir"))
    prefix = str(get("prefix"))
    os.makedirs(out_dir, exist_ok=True)

    variants = []
    if qch_list:
        if get("float_baseline"):
            variants.append(None)
        variants.extend(qch_list)
    else:
        variants.append(None)

    curves = {}
    outputs = []
    configs = {}
    for L in l_values:
        for q in variants:
            label = ("sc" if L == 1 else f"l{L}")
            if q is not None:
                label += f"_q{q}"
            cfg = SimConfig(
                code=code,
                decoder="sc" if L == 1 else "list",
                L=L,
                arith=arith if q is None else "fixed",
                q_ch=q,
                quant_delta=float(get("quant_delta")),
                ebn0_db=tuple(snrs),
                max_frames=int(get("max_frames")),
                min_errors=int(get("min_errors")),
                seed=seed,
            )
            points = run_sweep(cfg, jobs=jobs)
            configs[label] = cfg.to_dict()
            csv_path = os.path.join(out_dir, f"{prefix}_{label}.csv")
            json_path = os.path.join(out_dir, f"{prefix}_{label}.json")
            write_csv(points, csv_path)
            write_json(points, json_path,
                       manifest={"label": label, "version": __version__,
                                 "config": cfg.to_dict()})
            outputs.extend([csv_path, json_path])
            curves[label] = points
            for p in points:
                print(f"{label} ebn0={p.ebn0_db:g} frames={p.frames} "
                      f"fer={p.fer:.3e} ber={p.ber:.3e}")

    if not get("no_plot"):
        from .plotting import render_fer_curves
        png_path = os.path.join(out_dir, f"{prefix}.png")
        render_fer_curves(curves, png_path, title=f"N={code.N} K={code.K}")
        outputs.append(png_path)

    manifest = RunManifest(
        command="fer",
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
        config={"seed": seed, "runs": configs},
        outputs=sorted(outputs),
    )
    manifest_path = os.path.join(out_dir, f"{prefix}_manifest.json")
    with open(manifest_path, "w") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_hwreport(args) -> int:
    cfg = HwConfig(N=args.n, L=args.l, P=args.p, q_ch=args.qch,
                   rate=args.rate, f_clk=args.fclk)
    if args.json:
        print(json.dumps(report(cfg), indent=2, sort_keys=True))
    else:
        sys.stdout.write(format_report(cfg))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarlist",
        description="polar code encoding, SC/list decoding, and FER "
                    "simulation tools")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build and save a frozen set")
    p.add_argument("--n", type=int, required=True, help="block length")
    p.add_argument("--k", type=int, required=True, help="information bits")
    p.add_argument("--method", default="ga", help="ga or bec")
    p.add_argument("--design-snr", type=float, default=2.0,
                   help="design Eb/N0 in dB for ga")
    p.add_argument("--eps", type=float, default=0.5,
                   help="erasure probability for bec")
    p.add_argument("--out", default=None, help="output file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("decode", help="decode one frame of received symbols")
    p.add_argument("yfile", help="file with N received symbols")
    p.add_argument("--frozen", required=True, help="frozen-set file")
    p.add_argument("--sc", action="store_true", help="plain SC decode")
    p.add_argument("--list", dest="list_size", type=int, default=None,
                   metavar="L", help="list decode with list size L")
    p.add_argument("--arith", choices=("approx", "exact", "fixed"),
                   default="approx")
    p.add_argument("--qch", type=int, default=None,
                   help="channel LL bits for --arith fixed")
    p.add_argument("--qdelta", type=float, default=1.0,
                   help="quantizer step for --arith fixed")
    p.add_argument("--trace", default=None,
                   help="write a list-decode trace to this file")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("fer", help="Monte-Carlo FER/BER sweep")
    p.add_argument("--config", default=None,
                   help="JSON file with defaults for any option below")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--method", default=None)
    p.add_argument("--design-snr", dest="design_snr", type=float,
                   default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--frozen", default=None,
                   help="frozen-set file (overrides --n/--k construction)")
    p.add_argument("--snrs", default=None,
                   help="start:step:stop or comma list, in dB")
    p.add_argument("--list", default=None,
                   help="comma list of list sizes; 1 means SC")
    p.add_argument("--arith", choices=("approx", "exact"), default=None,
                   help="floating-point kernel for non-quantized runs")
    p.add_argument("--qch", default=None,
                   help="comma list of channel LL widths (fixed point)")
    p.add_argument("--float-baseline", dest="float_baseline",
                   action="store_const", const=True, default=None,
                   help="with --qch, also run the floating-point baseline")
    p.add_argument("--quant-delta", dest="quant_delta", type=float,
                   default=None)
    p.add_argument("--max-frames", dest="max_frames", type=int, default=None)
    p.add_argument("--min-errors", dest="min_errors", type=int, default=None)
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--prefix", default=None)
    p.add_argument("--no-plot", dest="no_plot", action="store_const",
                   const=True, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_fer)

    p = sub.add_parser("hwreport", help="hardware cost model report")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--p", type=int, default=64)
    p.add_argument("--qch", type=int, default=3)
    p.add_argument("--rate", type=float, default=0.5)
    p.add_argument("--fclk", type=float, default=459e6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_hwreport)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
