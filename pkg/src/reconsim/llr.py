"""Per-bit log-likelihood ratios for the three reconciliation schemes.

All LLRs follow the convention L = ln(P[bit=0]/P[bit=1]) and are clipped to
[-50, 50] before they reach the decoder.

Reverse reconciliation corrects Alice's knowledge of Bob's quantized frame,
so the hard-decision scheme uses the region transition probabilities given
Alice's symbol (a fixed 4 x 2 table), while the soft-metric scheme
additionally conditions on Bob's disclosed metric, which identifies the
channel output within each region hypothesis.  The direct scheme is the
forward baseline: Bob corrects toward Alice's labelled symbols from his
analog observation.
"""

import numpy as np
from scipy import special

from reconsim.channel import _quantile_bisect, mixture_log_pdf
from reconsim.softmetric import _complement

LLR_CLIP = 50.0

_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


def transition_matrix(constellation, spec):
    """Region transition probabilities P[x, k] = P(region = k | symbol = x).

    Intervals entirely to the right of the conditional mean are evaluated
    through the upper tail so entries stay accurate when they are tiny.

    Returns:
        (4, 4) array with rows summing to one.
    """
    edges = np.concatenate(([-np.inf], spec.thresholds, [np.inf]))
    z_lo = (edges[:-1] - constellation.amplitudes[:, np.newaxis]) / constellation.noise_sigma
    z_hi = (edges[1:] - constellation.amplitudes[:, np.newaxis]) / constellation.noise_sigma
    upper_tail = z_lo > 0
    prob = np.where(
        upper_tail,
        special.ndtr(-z_lo) - special.ndtr(-z_hi),
        special.ndtr(z_hi) - special.ndtr(z_lo),
    )
    return np.maximum(prob, 0.0)


def build_rrh_table(constellation, spec):
    """Hard-decision LLR table, indexed by Alice's symbol.

    Row x holds the two LLRs of Bob's label bits given symbol x was sent,
    L_i = ln P[bit_i = 0 | x] - ln P[bit_i = 1 | x], MSB first.

    Returns:
        (4, 2) array, clipped to [-50, 50].
    """
    prob = transition_matrix(constellation, spec)
    table = np.empty((4, 2))
    with np.errstate(divide="ignore"):
        for i in range(2):
            zero_group = spec.bit_map[:, i] == 0
            table[:, i] = np.log(prob[:, zero_group].sum(axis=1)) - np.log(
                prob[:, ~zero_group].sum(axis=1)
            )
    return np.clip(table, -LLR_CLIP, LLR_CLIP)


def _log_weights(x, n, constellation, complement_odd):
    """log of the unnormalized posterior weight of each region hypothesis.

    For hypothesis region k the disclosed metric identifies the channel
    output y_k = F_Y^{-1}((k + n)/4), and the weight is the likelihood
    ratio f_{Y|X=x}(y_k) / f_Y(y_k); the Jacobian of the (region, n) -> y
    change of variables, 1/(4 f_Y), is the same for every k and cancels
    after normalization.
    """
    x = np.asarray(x)
    n = np.asarray(n, dtype=np.float64)
    if not np.all((x >= 0) & (x <= 3)):
        raise ValueError("symbol indices must lie in {0,1,2,3}")
    if not np.all((n > 0.0) & (n <= 1.0)):
        raise ValueError("soft metrics must lie in (0, 1]")
    regions = np.arange(4)
    n_eff = _complement(n[..., np.newaxis], regions) if complement_odd else n[..., np.newaxis]
    y_k = _quantile_bisect(constellation, (regions + n_eff) / 4.0)
    z = (y_k - constellation.amplitudes[x][..., np.newaxis]) / constellation.noise_sigma
    log_cond = -0.5 * z * z - np.log(constellation.noise_sigma) - _LOG_SQRT_2PI
    return log_cond - mixture_log_pdf(constellation, y_k)


def region_posterior(x, n, constellation, complement_odd=False):
    """P(region | alice symbol x, disclosed metric n), shape (..., 4)."""
    logw = _log_weights(x, n, constellation, complement_odd)
    logw = logw - logw.max(axis=-1, keepdims=True)
    w = np.exp(logw)
    return w / w.sum(axis=-1, keepdims=True)


def llr_rrs(x, n, constellation, spec, complement_odd=False):
    """Soft-metric reverse-reconciliation LLRs of Bob's two label bits.

    Args:
        x: Alice's symbol indices.
        n: the disclosed soft metrics, in (0, 1].
        constellation: the channel model.
        spec: quantizer (thresholds are implicit in n; only the labelling
            is used here).
        complement_odd: must match the disclosure convention.

    Returns:
        Array of shape ``x.shape + (2,)``, MSB first, clipped to [-50, 50].
    """
    logw = _log_weights(x, n, constellation, complement_odd)
    llrs = np.empty(logw.shape[:-1] + (2,))
    for i in range(2):
        zero_group = spec.bit_map[:, i] == 0
        llrs[..., i] = special.logsumexp(logw[..., zero_group], axis=-1) - special.logsumexp(
            logw[..., ~zero_group], axis=-1
        )
    return np.clip(llrs, -LLR_CLIP, LLR_CLIP)


def llr_direct(y, constellation, spec):
    """Forward (direct) LLRs of Alice's two label bits given channel output y.

    Standard bit-metric demapping of the PAM-4 symbol under the labelling in
    ``spec``, with uniform priors.

    Returns:
        Array of shape ``y.shape + (2,)``, MSB first, clipped to [-50, 50].
    """
    y = np.asarray(y, dtype=np.float64)
    z = (y[..., np.newaxis] - constellation.amplitudes) / constellation.noise_sigma
    log_comp = -0.5 * z * z
    llrs = np.empty(y.shape + (2,))
    for i in range(2):
        zero_group = spec.bit_map[:, i] == 0
        llrs[..., i] = special.logsumexp(log_comp[..., zero_group], axis=-1) - special.logsumexp(
            log_comp[..., ~zero_group], axis=-1
        )
    return np.clip(llrs, -LLR_CLIP, LLR_CLIP)
