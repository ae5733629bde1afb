"""Maximum-likelihood fit of a multivariate normal and its univariate marginals."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from dtmrisk.distribution.elliptical import EllipticalDistribution
from dtmrisk.exceptions import DomainError
from dtmrisk.generators.families import GeneratorFamily, NormalFamily
from dtmrisk.models.report import FitSummary

logger = logging.getLogger("dtmrisk.estimation")

_PSD_TOLERANCE = 1e-12


@dataclass
class ReturnSeries:
    """One named column of returns."""

    name: str
    values: np.ndarray
    dates: list[str] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise DomainError(f"series '{self.name}' must be one-dimensional")
        if self.values.size < 2:
            raise DomainError(f"series '{self.name}' needs at least 2 observations")
        if not np.all(np.isfinite(self.values)):
            raise DomainError(f"series '{self.name}' contains non-finite values")


@dataclass(frozen=True)
class FittedModel:
    names: tuple[str, ...]
    mean: np.ndarray
    covariance: np.ndarray
    n_obs: int

    def __post_init__(self) -> None:
        k = len(self.names)
        if self.mean.shape != (k,) or self.covariance.shape != (k, k):
            raise DomainError(
                f"fitted model shapes disagree: {k} names, mean {self.mean.shape}, "
                f"covariance {self.covariance.shape}"
            )
        if not np.allclose(self.covariance, self.covariance.T, rtol=0.0, atol=_PSD_TOLERANCE):
            raise DomainError("covariance must be symmetric")
        smallest = float(np.linalg.eigvalsh(self.covariance).min())
        if smallest < -_PSD_TOLERANCE:
            raise DomainError(f"covariance is not positive semidefinite (eigenvalue {smallest})")

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.covariance).copy()

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DomainError(f"unknown series '{name}'") from None

    def to_summary(self) -> FitSummary:
        return FitSummary(
            names=list(self.names),
            n_obs=self.n_obs,
            mean=self.mean.tolist(),
            covariance=self.covariance.tolist(),
        )


def fit_normal_mle(series: Sequence[ReturnSeries]) -> FittedModel:
    """Sample mean and covariance with divisor n (the normal MLE)."""
    if not series:
        raise DomainError("fit_normal_mle needs at least one series")
    lengths = {s.values.size for s in series}
    if len(lengths) != 1:
        raise DomainError(f"series lengths differ: {sorted(lengths)}")

    data = np.column_stack([s.values for s in series])
    mean = data.mean(axis=0)
    covariance = np.atleast_2d(np.cov(data, rowvar=False, bias=True))
    covariance = 0.5 * (covariance + covariance.T)

    logger.info(f"Fitted normal MLE on {data.shape[0]} observations of {data.shape[1]} series")
    return FittedModel(
        names=tuple(s.name for s in series),
        mean=mean,
        covariance=covariance,
        n_obs=int(data.shape[0]),
    )


def marginal_distributions(
    model: FittedModel, family: GeneratorFamily | None = None
) -> list[EllipticalDistribution]:
    """Univariate marginals (μ_k, √Σ_kk); normal unless another family is given."""
    family = family or NormalFamily()
    marginals = []
    for name, mu, variance in zip(model.names, model.mean, model.variances):
        if not variance > 0.0:
            raise DomainError(f"series '{name}' has zero variance: degenerate scale")
        marginals.append(EllipticalDistribution(float(mu), math.sqrt(variance), family))
    return marginals
