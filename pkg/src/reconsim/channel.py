"""PAM-4 source and AWGN channel, plus the induced Gaussian-mixture marginal.

The transmitted symbol X is uniform over four equispaced real amplitudes
``a * (2k - 3)`` for k in {0,1,2,3} and the channel adds N(0, sigma^2) noise,
so the marginal density of the channel output Y is a four-component Gaussian
mixture.  Everything downstream (thresholds, soft metric, LLRs) is built on
the mixture cdf and its inverse, so those are computed here once, carefully.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


@dataclass(frozen=True)
class Constellation:
    """Uniform PAM-4 source over an AWGN channel with unit noise variance.

    Attributes:
        amplitudes: the four symbol amplitudes, strictly increasing.
        probabilities: prior of each symbol (uniform, 1/4).
        noise_sigma: standard deviation of the additive noise.
        snr_db: the signal-to-noise ratio (per real symbol) that generated
            the amplitudes, kept for reporting.
    """

    amplitudes: np.ndarray
    probabilities: np.ndarray
    noise_sigma: float
    snr_db: float

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", np.asarray(self.amplitudes, dtype=np.float64))
        object.__setattr__(self, "probabilities", np.asarray(self.probabilities, dtype=np.float64))


def make_constellation(snr_db):
    """Build the PAM-4 constellation for a given SNR.

    The noise variance is fixed to one, so the SNR determines the symbol
    spacing.  With amplitudes ``a * {-3,-1,+1,+3}`` and uniform priors the
    mean symbol energy is ``5 a^2``, hence ``a = sqrt(10^(snr_db/10) / 5)``.
    SNR is per real symbol (E[X^2] / sigma^2), in dB.

    Args:
        snr_db: signal-to-noise ratio in dB.  Any finite float is accepted.

    Returns:
        A :class:`Constellation`.
    """
    snr_db = float(snr_db)
    if not np.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite, got {snr_db!r}")
    a = np.sqrt(10.0 ** (snr_db / 10.0) / 5.0)
    amplitudes = a * np.array([-3.0, -1.0, 1.0, 3.0])
    probabilities = np.full(4, 0.25)
    return Constellation(amplitudes, probabilities, 1.0, snr_db)


def transmit(constellation, symbols, rng):
    """Send symbol indices through the AWGN channel.

    Args:
        constellation: a :class:`Constellation`.
        symbols: integer array of symbol indices in {0,1,2,3}.
        rng: a ``numpy.random.Generator``.

    Returns:
        Array of channel outputs, same shape as ``symbols``.
    """
    symbols = np.asarray(symbols)
    if symbols.size and (symbols.min() < 0 or symbols.max() > 3):
        raise ValueError("symbol indices must lie in {0,1,2,3}")
    mean = constellation.amplitudes[symbols]
    return mean + constellation.noise_sigma * rng.standard_normal(symbols.shape)


def mixture_pdf(constellation, y):
    """Marginal density f_Y(y) of the channel output."""
    y = np.asarray(y, dtype=np.float64)
    z = (y[..., np.newaxis] - constellation.amplitudes) / constellation.noise_sigma
    comp = np.exp(-0.5 * z * z) / (np.sqrt(2.0 * np.pi) * constellation.noise_sigma)
    return comp @ constellation.probabilities


def mixture_log_pdf(constellation, y):
    """log f_Y(y), computed in the log domain so deep tails stay finite."""
    y = np.asarray(y, dtype=np.float64)
    z = (y[..., np.newaxis] - constellation.amplitudes) / constellation.noise_sigma
    logcomp = (
        -0.5 * z * z
        - _LOG_SQRT_2PI
        - np.log(constellation.noise_sigma)
        + np.log(constellation.probabilities)
    )
    return special.logsumexp(logcomp, axis=-1)


def mixture_cdf(constellation, y):
    """Marginal cdf F_Y(y).

    Uses the erfc-based normal cdf (``scipy.special.ndtr``) per component so
    that tail values are accurate down to the underflow limit.
    """
    y = np.asarray(y, dtype=np.float64)
    z = (y[..., np.newaxis] - constellation.amplitudes) / constellation.noise_sigma
    return special.ndtr(z) @ constellation.probabilities


def _bracket(constellation):
    # 12 sigma beyond the outer amplitudes; F underflows/saturates outside.
    lo = constellation.amplitudes[0] - 12.0 * constellation.noise_sigma
    hi = constellation.amplitudes[-1] + 12.0 * constellation.noise_sigma
    return lo, hi


def _quantile_bisect(constellation, p):
    """Bisection for the mixture quantile, no argument checks.

    Accepts any p; values at or below F(lo) converge to the bracket's lower
    end and values at or above F(hi) (p = 1 included) to its upper end.
    72 halvings shrink the bracket below one ulp of the result, which also
    puts |F(result) - p| far below 1e-12 for p away from the saturated tails.
    """
    p = np.asarray(p, dtype=np.float64)
    lo, hi = _bracket(constellation)
    lo = np.full(p.shape, lo)
    hi = np.full(p.shape, hi)
    for _ in range(72):
        mid = 0.5 * (lo + hi)
        below = mixture_cdf(constellation, mid) < p
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def mixture_quantile(constellation, p):
    """Inverse of the marginal cdf.

    Args:
        constellation: a :class:`Constellation`.
        p: probabilities, each strictly inside (0, 1).

    Returns:
        Array y with F_Y(y) = p to within 1e-12 (absolute, in probability).

    Raises:
        ValueError: if any p lies outside the open interval (0, 1).
    """
    p_arr = np.asarray(p, dtype=np.float64)
    if not np.all((p_arr > 0.0) & (p_arr < 1.0)):
        raise ValueError("quantile arguments must lie strictly inside (0, 1)")
    return _quantile_bisect(constellation, p_arr)
