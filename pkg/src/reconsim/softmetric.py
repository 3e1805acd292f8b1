"""The soft metric Bob discloses alongside each quantized symbol.

Within region k the conditional cdf of Y is (4 F_Y(y) - k), which is uniform
on (0, 1] and independent of the region index.  Disclosing that value over
the public channel therefore leaks nothing about the reconciled bits on its
own; combined with Alice's symbol it pins down the channel output exactly
(up to the region hypothesis), which is what the soft-input LLRs exploit.
"""

import numpy as np

from reconsim.channel import _quantile_bisect, mixture_cdf

N_FLOOR = 1e-300

_REGION_MISMATCH_TOL = 1e-9


def _complement(n, regions):
    # map n -> 1 - n on odd regions; own inverse
    return np.where(np.asarray(regions) % 2 == 1, 1.0 - n, n)


def soft_metric(y, regions, constellation, complement_odd=False):
    """Per-sample soft metric N = 4 F_Y(y) - region, clamped to (0, 1].

    Args:
        y: channel outputs.
        regions: the region index of each y under the uniform quantizer
            (``quantize(y, spec)``); passing anything else is an error.
        constellation: the :class:`reconsim.channel.Constellation` the
            quantizer was built from.
        complement_odd: if True, disclose 1 - N on odd regions instead,
            making the metric continuous across thresholds.

    Returns:
        Array of metrics in (0, 1], same shape as y.

    Raises:
        ValueError: if the region indices are inconsistent with y.
    """
    regions = np.asarray(regions)
    raw = 4.0 * mixture_cdf(constellation, y) - regions
    if not np.all((raw >= -_REGION_MISMATCH_TOL) & (raw <= 1.0 + _REGION_MISMATCH_TOL)):
        raise ValueError("region indices do not match quantize(y) for this constellation")
    if complement_odd:
        raw = _complement(raw, regions)
    return np.clip(raw, N_FLOOR, 1.0)


def invert_soft_metric(regions, n, constellation, complement_odd=False):
    """Reconstruct the channel output from (region, metric).

    This is the receiver-side map Alice applies to each region hypothesis:
    y = F_Y^{-1}((region + n) / 4).  Exact inverse of :func:`soft_metric`
    up to the quantile tolerance; n = 1 maps to the upper end of the
    numeric support of the region.

    Args:
        regions: region indices in {0,1,2,3}.
        n: metrics in (0, 1].
        constellation: the matching constellation.
        complement_odd: must agree with the flag used when disclosing.

    Raises:
        ValueError: if regions or n are out of range.
    """
    regions = np.asarray(regions)
    n = np.asarray(n, dtype=np.float64)
    if not np.all((regions >= 0) & (regions <= 3)):
        raise ValueError("region indices must lie in {0,1,2,3}")
    if not np.all((n > 0.0) & (n <= 1.0)):
        raise ValueError("soft metrics must lie in (0, 1]")
    if complement_odd:
        n = _complement(n, regions)
    return _quantile_bisect(constellation, (regions + n) / 4.0)
