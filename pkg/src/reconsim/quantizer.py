"""Four-region quantizer with a uniform induced distribution.

Thresholds are the quartiles of the channel-output marginal, so the region
index of a random channel output is uniform on {0,1,2,3} by construction.
Each region carries a two-bit label; the labelling map (natural or Gray)
decides which physical bit of the reconciled frame flips between adjacent
regions.
"""

from dataclasses import dataclass

import numpy as np

from reconsim.channel import mixture_quantile

LABELLINGS = {
    "natural": np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.uint8),
    "gray": np.array([[0, 0], [0, 1], [1, 1], [1, 0]], dtype=np.uint8),
}


@dataclass(frozen=True)
class QuantizerSpec:
    """Thresholds plus the region-to-bits labelling.

    Attributes:
        thresholds: the three inner thresholds, strictly increasing.
        labelling: name of the labelling map ("natural" or "gray").
        bit_map: (4, 2) array, row k holds the label of region k, MSB first.
    """

    thresholds: np.ndarray
    labelling: str
    bit_map: np.ndarray


def compute_thresholds(constellation):
    """Quartile thresholds of the output marginal.

    Returns the three inner thresholds t_1 < t_2 < t_3 with
    F_Y(t_k) = k/4; the outer boundaries are -inf and +inf.  By symmetry of
    the constellation the middle threshold is zero (up to the quantile
    tolerance).
    """
    return mixture_quantile(constellation, np.array([0.25, 0.5, 0.75]))


def make_quantizer(constellation, labelling="natural"):
    """Build the quantizer for a constellation.

    Args:
        constellation: a :class:`reconsim.channel.Constellation`.
        labelling: "natural" (region index in binary) or "gray" (adjacent
            regions differ in one bit).

    Raises:
        ValueError: for an unknown labelling name.
    """
    if labelling not in LABELLINGS:
        raise ValueError(f"unknown labelling {labelling!r}, expected one of {sorted(LABELLINGS)}")
    thresholds = compute_thresholds(constellation)
    return QuantizerSpec(thresholds, labelling, LABELLINGS[labelling])


def quantize(y, spec):
    """Map channel outputs to region indices in {0,1,2,3}.

    Values equal to a threshold resolve to the lower region.
    """
    return np.searchsorted(spec.thresholds, np.asarray(y), side="left")


def bits_from_regions(regions, spec):
    """Labels of the given regions, shape ``regions.shape + (2,)``, MSB first.

    Also used to label symbol indices directly (the direct scheme labels
    Alice's symbols with the same map).
    """
    return spec.bit_map[np.asarray(regions)]


def build_frame(y, spec, n):
    """Quantize, demap, and concatenate into a length-n frame.

    Bits are MSB-then-LSB per sample, samples in order, truncated to n.

    Args:
        y: at least ceil(n/2) channel outputs.
        spec: the quantizer.
        n: frame length in bits.

    Returns:
        (frame, regions): the (n,) uint8 frame and the region index of
        every input sample (needed to pair soft metrics with positions).

    Raises:
        ValueError: if fewer than ceil(n/2) samples are given.
    """
    y = np.asarray(y)
    needed = -(-n // 2)
    if y.size < needed:
        raise ValueError(f"need at least {needed} samples for a {n}-bit frame, got {y.size}")
    regions = quantize(y, spec)
    frame = bits_from_regions(regions, spec).reshape(-1)[:n]
    return frame, regions
