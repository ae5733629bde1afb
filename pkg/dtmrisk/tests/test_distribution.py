"""Tests for the elliptical distribution and truncation windows."""

import math

import numpy as np
import pytest

from dtmrisk.distribution.elliptical import (
    EllipticalDistribution,
    cdf,
    make_window,
    pdf,
    quantile,
    truncated_prob,
)
from dtmrisk.exceptions import DomainError
from dtmrisk.generators.families import LaplaceFamily, LogisticFamily, NormalFamily


class TestDensity:
    def test_standard_normal_mode(self, standard_normal):
        assert pdf(standard_normal, 0.0) == pytest.approx(0.3989422804, abs=1e-10)

    def test_scale_divides_density(self, family):
        base = EllipticalDistribution(0.0, 1.0, family)
        scaled = EllipticalDistribution(1.5, 2.5, family)
        assert scaled.pdf(1.5 + 2.5 * 0.7) == pytest.approx(base.pdf(0.7) / 2.5, rel=1e-14)

    def test_invalid_parameters(self):
        with pytest.raises(DomainError):
            EllipticalDistribution(0.0, 0.0, NormalFamily())
        with pytest.raises(DomainError):
            EllipticalDistribution(math.inf, 1.0, NormalFamily())


class TestCdf:
    def test_median_at_location(self, family):
        dist = EllipticalDistribution(1.3, 2.0, family)
        assert cdf(dist, 1.3) == pytest.approx(0.5, abs=1e-10)

    def test_normal_value(self, standard_normal):
        assert cdf(standard_normal, 1.959964) == pytest.approx(0.975, abs=1e-8)

    def test_infinite_arguments(self, family):
        dist = EllipticalDistribution(0.0, 1.0, family)
        assert dist.cdf(-math.inf) == 0.0
        assert dist.cdf(math.inf) == 1.0

    @pytest.mark.parametrize("x", [-3.0, -0.4, 0.9, 2.5])
    def test_closed_form_matches_quadrature(self, closed_family, x):
        dist = EllipticalDistribution(0.2, 1.4, closed_family)
        assert dist.cdf(x) == pytest.approx(dist.cdf_by_quadrature(x), abs=1e-9)

    def test_truncated_prob(self, standard_normal):
        assert truncated_prob(standard_normal, -math.inf, math.inf) == 1.0
        lo, hi = standard_normal.quantile(0.05), standard_normal.quantile(0.95)
        assert truncated_prob(standard_normal, lo, hi) == pytest.approx(0.9, abs=1e-12)

    def test_truncated_prob_order(self, standard_normal):
        with pytest.raises(DomainError):
            truncated_prob(standard_normal, 1.0, -1.0)

    def test_truncated_prob_additive(self, family, rng):
        dist = EllipticalDistribution(0.4, 1.8, family)
        for _ in range(10):
            a, b, c = (float(v) for v in np.sort(rng.uniform(-6.0, 6.0, size=3)))
            split = truncated_prob(dist, a, b) + truncated_prob(dist, b, c)
            assert split == pytest.approx(truncated_prob(dist, a, c), abs=1e-12)


class TestQuantile:
    def test_median(self, family):
        dist = EllipticalDistribution(-0.7, 3.0, family)
        assert quantile(dist, 0.5) == pytest.approx(-0.7, abs=1e-10)

    def test_normal_value(self, standard_normal):
        assert quantile(standard_normal, 0.975) == pytest.approx(1.959964, abs=1e-6)

    def test_laplace_closed_form(self):
        dist = EllipticalDistribution(0.0, 1.0, LaplaceFamily())
        assert dist.quantile(0.1) == pytest.approx(math.log(0.2), rel=1e-14)
        assert dist.quantile(0.9) == pytest.approx(-math.log(0.2), rel=1e-14)

    @pytest.mark.parametrize("level", [1e-6, 0.05, 0.3, 0.7, 0.999])
    def test_inverts_cdf(self, family, level):
        dist = EllipticalDistribution(0.5, 1.7, family)
        assert dist.cdf(dist.quantile(level)) == pytest.approx(level, abs=1e-10)

    def test_logistic_uses_root_finding(self):
        dist = EllipticalDistribution(0.0, 1.0, LogisticFamily())
        assert LogisticFamily().standard_ppf(0.9) is None
        assert dist.quantile(0.9) == pytest.approx(-dist.quantile(0.1), abs=1e-10)

    @pytest.mark.parametrize("level", [0.0, 1.0, -0.1, 1.5])
    def test_level_rejected(self, standard_normal, level):
        with pytest.raises(DomainError):
            standard_normal.quantile(level)


class TestWindow:
    def test_symmetric_window(self, standard_normal):
        window = make_window(standard_normal, 0.05, 0.95)
        assert window.symmetric
        assert window.xi_q == pytest.approx(1.644854, abs=1e-6)
        assert window.xi_p == -window.xi_q

    def test_full_support(self, family):
        window = make_window(EllipticalDistribution(0.0, 1.0, family), 0.0, 1.0)
        assert window.xi_p == -math.inf
        assert window.xi_q == math.inf
        assert window.symmetric

    def test_one_sided(self):
        dist = EllipticalDistribution(2.0, 3.0, NormalFamily())
        window = dist.window(0.5, 1.0)
        assert window.x_p == pytest.approx(2.0, abs=1e-15)
        assert window.x_q == math.inf
        assert not window.symmetric

    def test_bounds_map_through_location_scale(self, closed_family):
        dist = EllipticalDistribution(-1.0, 0.5, closed_family)
        window = dist.window(0.1, 0.8)
        assert window.x_p == pytest.approx(dist.quantile(0.1), rel=1e-14)
        assert window.x_q == pytest.approx(dist.quantile(0.8), rel=1e-14)
        assert window.xi_p == pytest.approx(dist.standardize(window.x_p), abs=1e-14)

    @pytest.mark.parametrize("p,q", [(0.5, 0.5), (0.6, 0.4), (-0.1, 0.5), (0.2, 1.1)])
    def test_invalid_levels(self, standard_normal, p, q):
        with pytest.raises(DomainError):
            standard_normal.window(p, q)
