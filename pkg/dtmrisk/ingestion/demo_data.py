"""Reference fit of three LSE finance segments and a synthetic return source built on it."""

from __future__ import annotations

import logging

import numpy as np

from dtmrisk.estimation.mle import FittedModel, ReturnSeries
from dtmrisk.exceptions import DomainError
from dtmrisk.ingestion.base import ReturnSource

logger = logging.getLogger("dtmrisk.ingestion.demo")

# Weekly stock returns, London Stock Exchange, April 2013 to November 2019.
SEGMENT_NAMES = ("Banks", "Insurance", "Financial and Credit Service")
SEGMENT_KEYS = {"banks": 0, "insurance": 1, "financial-credit": 2}

SEGMENT_MEAN = 1e-3 * np.array([-1.140677, 5.896240, 2.107343])

SEGMENT_COVARIANCE = 1e-4 * np.array(
    [
        [19.088935, 12.503116, -3.720492],
        [12.503116, 20.268816, -3.162601],
        [-3.720492, -3.162601, 8.851913],
    ]
)


def reference_model() -> FittedModel:
    """The published normal MLE for the three segments."""
    return FittedModel(
        names=SEGMENT_NAMES,
        mean=SEGMENT_MEAN.copy(),
        covariance=SEGMENT_COVARIANCE.copy(),
        n_obs=0,
    )


def segment_parameters(key: str) -> tuple[float, float]:
    """(μ, σ) of one segment's marginal, by CLI key."""
    if key not in SEGMENT_KEYS:
        raise DomainError(f"unknown segment '{key}', expected one of {sorted(SEGMENT_KEYS)}")
    i = SEGMENT_KEYS[key]
    return float(SEGMENT_MEAN[i]), float(np.sqrt(SEGMENT_COVARIANCE[i, i]))


class DemoReturnSource(ReturnSource):
    """Multivariate normal draws from the reference segment fit."""

    def __init__(self, n_obs: int = 344, seed: int = 0) -> None:
        if n_obs < 2:
            raise DomainError(f"demo source needs n_obs >= 2, got {n_obs}")
        self.n_obs = n_obs
        self.seed = seed

    @property
    def source_name(self) -> str:
        return "demo"

    def load(self) -> list[ReturnSeries]:
        rng = np.random.default_rng(self.seed)
        draws = rng.multivariate_normal(SEGMENT_MEAN, SEGMENT_COVARIANCE, size=self.n_obs)
        logger.info(f"Generated {self.n_obs} synthetic weekly returns (seed={self.seed})")
        return [
            ReturnSeries(name=name, values=draws[:, i]) for i, name in enumerate(SEGMENT_NAMES)
        ]
