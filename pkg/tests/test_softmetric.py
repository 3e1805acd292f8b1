"""Tests for the disclosed soft metric and its inverse map."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from reconsim.channel import make_constellation, mixture_quantile, transmit
from reconsim.quantizer import make_quantizer, quantize
from reconsim.softmetric import invert_soft_metric, soft_metric

SNR_UNIT_AMPLITUDE = 10.0 * np.log10(5.0)

RNG_SEED_UNIFORMITY = 11
RNG_SEED_ROUNDTRIP = 13


@pytest.fixture
def constellation():
    return make_constellation(SNR_UNIT_AMPLITUDE)


@pytest.fixture
def spec(constellation):
    return make_quantizer(constellation)


class TestSoftMetric:
    """n = 4 F_Y(y) - region on channel outputs."""

    def test_center_of_region_one(self, constellation) -> None:
        """y = 0 closes region 1, so its metric is exactly 1."""
        n = soft_metric(np.array([0.0]), np.array([1]), constellation)
        np.testing.assert_allclose(n, 1.0, atol=1e-12)

    def test_region_zero_midpoint(self, constellation) -> None:
        """n = 0.5 in region 0 corresponds to the 12.5% quantile."""
        y = mixture_quantile(constellation, 0.125)
        n = soft_metric(np.array([y]), np.array([0]), constellation)
        np.testing.assert_allclose(n, 0.5, atol=1e-12)

    def test_range_is_half_open_unit_interval(self, constellation, spec) -> None:
        rng = np.random.default_rng(RNG_SEED_UNIFORMITY)
        y = transmit(constellation, rng.integers(0, 4, size=20000), rng)
        regions = quantize(y, spec)
        n = soft_metric(y, regions, constellation)
        assert n.min() > 0.0
        assert n.max() <= 1.0

    def test_uniform_within_each_region(self, constellation, spec) -> None:
        """KS check of the per-region metric distribution."""
        rng = np.random.default_rng(RNG_SEED_UNIFORMITY)
        y = transmit(constellation, rng.integers(0, 4, size=80000), rng)
        regions = quantize(y, spec)
        n = soft_metric(y, regions, constellation)
        for k in range(4):
            pvalue = stats.kstest(n[regions == k], "uniform").pvalue
            assert pvalue > 1e-3

    def test_metric_floor_in_deep_tail(self, constellation) -> None:
        """Far below the constellation the raw metric underflows; it is
        clamped to a tiny positive value instead of reaching zero."""
        n = soft_metric(np.array([-50.0]), np.array([0]), constellation)
        assert 0.0 < n[0] <= 1e-250

    def test_region_mismatch_rejected(self, constellation) -> None:
        with pytest.raises(ValueError):
            soft_metric(np.array([3.0]), np.array([0]), constellation)

    def test_complement_flips_odd_regions(self, constellation, spec) -> None:
        rng = np.random.default_rng(RNG_SEED_UNIFORMITY)
        y = transmit(constellation, rng.integers(0, 4, size=1000), rng)
        regions = quantize(y, spec)
        plain = soft_metric(y, regions, constellation)
        flipped = soft_metric(y, regions, constellation, complement_odd=True)
        odd = regions % 2 == 1
        np.testing.assert_allclose(flipped[odd], 1.0 - plain[odd], atol=1e-12)
        np.testing.assert_array_equal(flipped[~odd], plain[~odd])


class TestInvertSoftMetric:
    """Reconstruction of y from (region, n)."""

    def test_region_one_full_metric_maps_to_zero(self, constellation) -> None:
        y = invert_soft_metric(np.array([1]), np.array([1.0]), constellation)
        assert abs(y[0]) < 1e-9

    def test_region_zero_midpoint(self, constellation) -> None:
        y = invert_soft_metric(np.array([0]), np.array([0.5]), constellation)
        np.testing.assert_allclose(
            y, mixture_quantile(constellation, 0.125), rtol=1e-9
        )

    def test_roundtrip_from_channel_samples(self, constellation, spec) -> None:
        rng = np.random.default_rng(RNG_SEED_ROUNDTRIP)
        y = transmit(constellation, rng.integers(0, 4, size=5000), rng)
        # stay inside the range where the mixture cdf keeps y-resolution
        hi = constellation.amplitudes[-1] + 5.5 * constellation.noise_sigma
        y = np.clip(y, -hi, hi)
        regions = quantize(y, spec)
        n = soft_metric(y, regions, constellation)
        back = invert_soft_metric(regions, n, constellation)
        np.testing.assert_allclose(back, y, atol=1e-8)

    def test_roundtrip_with_complement(self, constellation, spec) -> None:
        """Both metric conventions reconstruct the same y."""
        rng = np.random.default_rng(RNG_SEED_ROUNDTRIP)
        y = transmit(constellation, rng.integers(0, 4, size=2000), rng)
        hi = constellation.amplitudes[-1] + 5.5 * constellation.noise_sigma
        y = np.clip(y, -hi, hi)
        regions = quantize(y, spec)
        n_c = soft_metric(y, regions, constellation, complement_odd=True)
        back = invert_soft_metric(regions, n_c, constellation, complement_odd=True)
        np.testing.assert_allclose(back, y, atol=1e-8)

    def test_reconstruction_stays_in_region(self, constellation, spec) -> None:
        rng = np.random.default_rng(RNG_SEED_ROUNDTRIP)
        regions = rng.integers(0, 4, size=400)
        n = rng.uniform(1e-6, 1.0, size=400)
        y = invert_soft_metric(regions, n, constellation)
        np.testing.assert_array_equal(quantize(y, spec), regions)

    @pytest.mark.parametrize("bad_n", [0.0, -0.1, 1.0 + 1e-9, np.nan])
    def test_rejects_metric_outside_range(self, constellation, bad_n) -> None:
        with pytest.raises(ValueError):
            invert_soft_metric(np.array([1]), np.array([bad_n]), constellation)

    @pytest.mark.parametrize("bad_region", [-1, 4])
    def test_rejects_bad_region(self, constellation, bad_region) -> None:
        with pytest.raises(ValueError):
            invert_soft_metric(np.array([bad_region]), np.array([0.5]), constellation)

    @given(
        snr_db=st.floats(min_value=-20.0, max_value=10.0),
        region=st.integers(min_value=0, max_value=3),
        n=st.floats(min_value=1e-6, max_value=1.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_invert_then_forward_is_identity(
        self, snr_db: float, region: int, n: float
    ) -> None:
        c = make_constellation(snr_db)
        y = invert_soft_metric(np.array([region]), np.array([n]), c)
        back = soft_metric(y, np.array([region]), c)
        np.testing.assert_allclose(back, n, atol=1e-9)
