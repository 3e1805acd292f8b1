"""Simulation library for reverse reconciliation of a PAM-4 AWGN channel.

The package covers the full chain studied here: modulation and channel
(:mod:`reconsim.channel`), quantization of the received values
(:mod:`reconsim.quantizer`), the disclosed soft metric
(:mod:`reconsim.softmetric`), per-bit LLRs for the different reconciliation
schemes (:mod:`reconsim.llr`), syndrome-based LDPC decoding
(:mod:`reconsim.ldpc`), information-theoretic metrics
(:mod:`reconsim.metrics`) and the Monte-Carlo driver
(:mod:`reconsim.simulator`).
"""

from reconsim.channel import (
    Constellation,
    make_constellation,
    mixture_cdf,
    mixture_log_pdf,
    mixture_pdf,
    mixture_quantile,
    transmit,
)
from reconsim.quantizer import (
    QuantizerSpec,
    bits_from_regions,
    build_frame,
    compute_thresholds,
    make_quantizer,
    quantize,
)
from reconsim.softmetric import invert_soft_metric, soft_metric
from reconsim.llr import (
    build_rrh_table,
    llr_direct,
    llr_rrs,
    region_posterior,
    transition_matrix,
)
from reconsim.ldpc import (
    DecodeResult,
    ParityCheckMatrix,
    decode_syndrome,
    generate_regular_code,
    load_alist,
    syndrome,
    write_alist,
)
from reconsim.metrics import (
    beta_from_snr,
    bmi_mc,
    mi_hard,
    mi_soft_mc,
    mi_xy,
    snr_for_beta,
)
from reconsim.simulator import (
    PointResult,
    SimPoint,
    load_sweep,
    run_point,
    run_round,
    run_sweep,
)

__all__ = [
    "Constellation",
    "make_constellation",
    "transmit",
    "mixture_pdf",
    "mixture_log_pdf",
    "mixture_cdf",
    "mixture_quantile",
    "QuantizerSpec",
    "make_quantizer",
    "compute_thresholds",
    "quantize",
    "bits_from_regions",
    "build_frame",
    "soft_metric",
    "invert_soft_metric",
    "transition_matrix",
    "build_rrh_table",
    "llr_rrs",
    "llr_direct",
    "region_posterior",
    "ParityCheckMatrix",
    "DecodeResult",
    "load_alist",
    "write_alist",
    "generate_regular_code",
    "syndrome",
    "decode_syndrome",
    "mi_xy",
    "mi_hard",
    "mi_soft_mc",
    "bmi_mc",
    "beta_from_snr",
    "snr_for_beta",
    "SimPoint",
    "PointResult",
    "run_round",
    "run_point",
    "run_sweep",
    "load_sweep",
]
