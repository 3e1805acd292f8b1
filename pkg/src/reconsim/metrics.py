"""Mutual-information and efficiency figures for the reconciliation schemes.

Rates are in bits.  The efficiency of a rate-R code over the PAM-4 channel
is measured against the Gaussian capacity at the same SNR,

    beta = R * bits_per_symbol * ln 2 / ln(1 + snr),

which is the convention used for all beta values reported by the simulator.
"""

import numpy as np
from scipy import integrate

from reconsim.channel import mixture_log_pdf, transmit
from reconsim.llr import (
    build_rrh_table,
    llr_direct,
    llr_rrs,
    region_posterior,
    transition_matrix,
)
from reconsim.quantizer import bits_from_regions, make_quantizer, quantize
from reconsim.softmetric import soft_metric

_LN2 = np.log(2.0)


def mi_xy(constellation, tol=1e-9):
    """Mutual information I(X;Y) of the PAM-4 AWGN channel, in bits.

    Integrates f_{Y|x} * ln(f_{Y|x} / f_Y) per symbol with an adaptive
    quadrature; the window [a_x - 12 sigma, a_x + 12 sigma] carries all the
    mass at double precision.
    """
    sigma = constellation.noise_sigma
    total = 0.0
    for x, a_x in enumerate(constellation.amplitudes):
        def integrand(y):
            z = (y - a_x) / sigma
            log_cond = -0.5 * z * z - np.log(sigma) - 0.5 * np.log(2.0 * np.pi)
            return np.exp(log_cond) * (log_cond - mixture_log_pdf(constellation, y))

        lo = a_x - 12.0 * sigma
        hi = a_x + 12.0 * sigma
        inner = [float(a) for a in constellation.amplitudes if lo < a < hi]
        val, _ = integrate.quad(integrand, lo, hi, points=inner, limit=200, epsabs=tol, epsrel=tol)
        total += constellation.probabilities[x] * val
    return total / _LN2


def mi_hard(constellation, spec):
    """Mutual information I(X; region) through the uniform quantizer, in bits."""
    prob = transition_matrix(constellation, spec)
    joint = constellation.probabilities[:, np.newaxis] * prob
    marg = joint.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = joint * np.log(prob / marg)
    return float(np.where(joint > 0, terms, 0.0).sum()) / _LN2


def mi_soft_mc(constellation, num_samples, seed, complement_odd=False):
    """Monte-Carlo estimate of I(X; region, N), the rate of the soft scheme.

    Draws (x, y) from the channel, discloses (region, n), and averages
    2 + log2 P(region | x, n); the entropy of the disclosed pair given n
    alone is exactly 2 bits because region and N are independent uniform.

    Returns:
        (estimate, stderr) in bits per symbol.
    """
    rng = np.random.default_rng(seed)
    spec = make_quantizer(constellation)
    x = rng.integers(0, 4, num_samples)
    y = transmit(constellation, x, rng)
    regions = quantize(y, spec)
    n = soft_metric(y, regions, constellation, complement_odd)
    post = region_posterior(x, n, constellation, complement_odd)
    p_true = np.maximum(post[np.arange(num_samples), regions], 1e-300)
    vals = 2.0 + np.log2(p_true)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(num_samples))


def bmi_mc(constellation, spec, scheme, num_samples, seed, complement_odd=False):
    """Monte-Carlo bit-metric (BICM) rate of a scheme's LLRs, in bits/symbol.

    Estimates sum_i (1 - E[log2(1 + exp(-(1-2b_i) L_i))]) where b_i are the
    reconciled bits (Bob's label bits for rrh/rrs, Alice's for direct) and
    L_i the scheme's LLRs.  This is the rate a matched bitwise decoder can
    reach, so it orders labellings the way decoding performance does.

    Returns:
        (estimate, stderr) in bits per symbol.
    """
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 4, num_samples)
    y = transmit(constellation, x, rng)
    if scheme == "direct":
        bits = bits_from_regions(x, spec)
        llrs = llr_direct(y, constellation, spec)
    elif scheme == "rrh":
        regions = quantize(y, spec)
        bits = bits_from_regions(regions, spec)
        llrs = build_rrh_table(constellation, spec)[x]
    elif scheme == "rrs":
        regions = quantize(y, spec)
        bits = bits_from_regions(regions, spec)
        n = soft_metric(y, regions, constellation, complement_odd)
        llrs = llr_rrs(x, n, constellation, spec, complement_odd)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    sgn = 1.0 - 2.0 * bits.astype(np.float64)
    # log2(1 + exp(-s*L)) per bit, summed over the two bit levels
    loss = np.logaddexp(0.0, -sgn * llrs).sum(axis=-1) / _LN2
    vals = 2.0 - loss
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(num_samples))


def beta_from_snr(snr_db, rate, bits_per_symbol=2):
    """Reconciliation efficiency of a rate-``rate`` code at the given SNR."""
    if rate <= 0 or rate >= 1:
        raise ValueError("rate must lie strictly inside (0, 1)")
    snr_lin = 10.0 ** (np.asarray(snr_db, dtype=np.float64) / 10.0)
    return rate * bits_per_symbol * _LN2 / np.log(1.0 + snr_lin)


def snr_for_beta(beta, rate, bits_per_symbol=2):
    """SNR (dB) at which a rate-``rate`` code has efficiency ``beta``.

    Inverse of :func:`beta_from_snr` in its first argument.
    """
    if rate <= 0 or rate >= 1:
        raise ValueError("rate must lie strictly inside (0, 1)")
    beta = np.asarray(beta, dtype=np.float64)
    if np.any(beta <= 0):
        raise ValueError("beta must be positive")
    snr_lin = 2.0 ** (rate * bits_per_symbol / beta) - 1.0
    return 10.0 * np.log10(snr_lin)
