"""Tests for the normal MLE fit and its marginals."""

import math

import numpy as np
import pytest

from dtmrisk.estimation.mle import (
    FittedModel,
    ReturnSeries,
    fit_normal_mle,
    marginal_distributions,
)
from dtmrisk.exceptions import DomainError
from dtmrisk.generators.families import StudentTFamily
from dtmrisk.ingestion.demo_data import (
    SEGMENT_COVARIANCE,
    SEGMENT_MEAN,
    DemoReturnSource,
    reference_model,
    segment_parameters,
)


class TestFitNormalMle:
    def test_two_point_series(self):
        model = fit_normal_mle([ReturnSeries(name="x", values=[-1.0, 1.0])])
        assert model.mean[0] == 0.0
        assert model.covariance[0, 0] == pytest.approx(1.0, rel=1e-15)
        assert model.n_obs == 2

    def test_constant_series(self):
        model = fit_normal_mle([ReturnSeries(name="flat", values=[0.25] * 10)])
        assert model.mean[0] == 0.25
        assert model.covariance[0, 0] == 0.0
        with pytest.raises(DomainError, match="degenerate scale"):
            marginal_distributions(model)

    def test_recovers_parameters(self, rng):
        values = rng.normal(5e-3, 2e-3, size=100_000)
        model = fit_normal_mle([ReturnSeries(name="x", values=values)])
        stderr = 2e-3 / math.sqrt(values.size)
        assert abs(model.mean[0] - 5e-3) <= 3.5 * stderr
        assert math.sqrt(model.covariance[0, 0]) == pytest.approx(2e-3, rel=0.02)

    def test_affine_equivariance(self, rng):
        x = rng.normal(0.0, 1.0, size=500)
        y = 0.3 * x + rng.normal(0.0, 0.5, size=500)
        base = fit_normal_mle([ReturnSeries("x", x), ReturnSeries("y", y)])
        moved = fit_normal_mle([ReturnSeries("x", 2.0 * x + 1.0), ReturnSeries("y", 2.0 * y + 1.0)])
        np.testing.assert_allclose(moved.mean, 2.0 * base.mean + 1.0, rtol=1e-10)
        np.testing.assert_allclose(moved.covariance, 4.0 * base.covariance, rtol=1e-10)

    def test_divisor_is_sample_size(self, rng):
        x = rng.normal(size=50)
        model = fit_normal_mle([ReturnSeries("x", x)])
        assert model.covariance[0, 0] == pytest.approx(np.var(x), rel=1e-12)

    def test_unequal_lengths(self):
        with pytest.raises(DomainError, match="lengths differ"):
            fit_normal_mle([ReturnSeries("a", [1.0, 2.0]), ReturnSeries("b", [1.0, 2.0, 3.0])])

    def test_no_series(self):
        with pytest.raises(DomainError):
            fit_normal_mle([])


class TestReturnSeries:
    def test_too_short(self):
        with pytest.raises(DomainError):
            ReturnSeries("x", [0.1])

    def test_non_finite(self):
        with pytest.raises(DomainError):
            ReturnSeries("x", [0.1, math.nan, 0.2])


class TestFittedModel:
    def test_rejects_indefinite_covariance(self):
        with pytest.raises(DomainError, match="positive semidefinite"):
            FittedModel(
                names=("a", "b"),
                mean=np.zeros(2),
                covariance=np.array([[1.0, 2.0], [2.0, 1.0]]),
                n_obs=10,
            )

    def test_rejects_shape_mismatch(self):
        with pytest.raises(DomainError):
            FittedModel(names=("a",), mean=np.zeros(2), covariance=np.eye(2), n_obs=10)

    def test_identity_marginals_are_standard(self):
        model = FittedModel(names=("a", "b"), mean=np.zeros(2), covariance=np.eye(2), n_obs=5)
        for dist in marginal_distributions(model):
            assert (dist.mu, dist.sigma) == (0.0, 1.0)

    def test_other_family(self):
        model = FittedModel(names=("a",), mean=np.ones(1), covariance=np.eye(1) * 4.0, n_obs=5)
        (dist,) = marginal_distributions(model, family=StudentTFamily(m=5.0))
        assert dist.family == StudentTFamily(m=5.0)
        assert dist.sigma == 2.0

    def test_index(self):
        model = reference_model()
        assert model.index("Insurance") == 1
        with pytest.raises(DomainError):
            model.index("Energy")


class TestReferenceModel:
    def test_insurance_marginal(self):
        insurance = marginal_distributions(reference_model())[1]
        assert insurance.mu == pytest.approx(5.896240e-3, rel=1e-12)
        assert insurance.sigma == pytest.approx(math.sqrt(20.268816e-4), rel=1e-12)

    def test_segment_parameters(self):
        mu, sigma = segment_parameters("banks")
        assert mu == pytest.approx(-1.140677e-3, rel=1e-12)
        assert sigma == pytest.approx(math.sqrt(19.088935e-4), rel=1e-12)
        with pytest.raises(DomainError, match="unknown segment"):
            segment_parameters("energy")

    def test_summary(self):
        summary = reference_model().to_summary()
        assert summary.names[2] == "Financial and Credit Service"
        assert summary.covariance[0][2] == pytest.approx(-3.720492e-4, rel=1e-12)


class TestDemoSource:
    def test_fit_recovers_reference(self):
        n_obs = 20_000
        model = fit_normal_mle(DemoReturnSource(n_obs=n_obs, seed=3).load())
        stderr = np.sqrt(np.diag(SEGMENT_COVARIANCE) / n_obs)
        assert np.all(np.abs(model.mean - SEGMENT_MEAN) <= 4.0 * stderr)
        np.testing.assert_allclose(model.covariance, SEGMENT_COVARIANCE, atol=1e-4)

    def test_seeded(self):
        first = DemoReturnSource(n_obs=50, seed=9).load()
        second = DemoReturnSource(n_obs=50, seed=9).load()
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.values, b.values)

    def test_too_small(self):
        with pytest.raises(DomainError):
            DemoReturnSource(n_obs=1)
