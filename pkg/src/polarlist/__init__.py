"""Polar code construction, SC and list decoding, and FER simulation.

Decoding works in the negative log-likelihood domain (smaller is more
likely) with selectable arithmetic: exact min* kernels, the min
approximation, or integer-valued fixed point with per-stage bit growth.
The list decoder shares stage likelihoods between duplicated paths
through a pointer memory instead of copying them; a plain copy-based
reference decoder with identical behavior is included for checking.
"""

from .arith import (APPROX, APPROX_MIN, EXACT, EXACT_MINSTAR, FIXED_POINT,
                    ArithModel, f_ll, fixed_point, g_ll, min_star,
                    stage_width)
from .channel import (ChannelParams, QuantConfig, add_awgn, channel_ll,
                      modulate, normalize_ll_pairs, quantize_ll)
from .code import (BHATTACHARYYA_BEC, GAUSSIAN_APPROX, PolarCode,
                   construct_frozen_set, encode, extract_info,
                   load_frozen_set, polar_transform, save_frozen_set)
from .hwmodel import (HwConfig, coded_throughput, comparator_count,
                      decode_cycles, format_report, ll_storage_bits,
                      ll_storage_bits_summation, pointer_bits, report,
                      sc_cycles, total_state_bits)
from .listdec import (ListState, ListTrace, apply_selection, compute_metrics,
                      format_trace, frozen_extend, list_decode,
                      path_selection, reference_list_decode)
from .scdec import (active_stage, new_partial_sums, partial_sum_bits,
                    sc_decode, update_partial_sums, update_stage)
from .sim import (FerPoint, SimConfig, run_point, run_sweep, write_csv,
                  write_json)

__version__ = "0.1.0"

__all__ = [
    "APPROX", "APPROX_MIN", "EXACT", "EXACT_MINSTAR", "FIXED_POINT",
    "ArithModel", "f_ll", "fixed_point", "g_ll", "min_star", "stage_width",
    "ChannelParams", "QuantConfig", "add_awgn", "channel_ll", "modulate",
    "normalize_ll_pairs", "quantize_ll",
    "BHATTACHARYYA_BEC", "GAUSSIAN_APPROX", "PolarCode",
    "construct_frozen_set", "encode", "extract_info", "load_frozen_set",
    "polar_transform", "save_frozen_set",
    "HwConfig", "coded_throughput", "comparator_count", "decode_cycles",
    "format_report", "ll_storage_bits", "ll_storage_bits_summation",
    "pointer_bits", "report", "sc_cycles", "total_state_bits",
    "ListState", "ListTrace", "apply_selection", "compute_metrics",
    "format_trace", "frozen_extend", "list_decode", "path_selection",
    "reference_list_decode",
    "active_stage", "new_partial_sums", "partial_sum_bits", "sc_decode",
    "update_partial_sums", "update_stage",
    "FerPoint", "SimConfig", "run_point", "run_sweep", "write_csv",
    "write_json",
    "__version__",
]
