"""Univariate elliptical distribution: pdf, cdf, quantile and truncation windows."""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass

from scipy import optimize

from dtmrisk.config import settings
from dtmrisk.exceptions import DomainError
from dtmrisk.generators.families import GeneratorFamily

logger = logging.getLogger("dtmrisk.distribution")

_SYMMETRY_TOL = 4.0 * sys.float_info.epsilon
_MAX_BRACKET_DOUBLINGS = 80


@dataclass(frozen=True)
class TruncationWindow:
    """Quantile window [x_p, x_q] with its standardized bounds ξ = (x - μ)/σ."""

    p: float
    q: float
    x_p: float
    x_q: float
    xi_p: float
    xi_q: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.p < self.q <= 1.0):
            raise DomainError(f"window requires 0 <= p < q <= 1, got p={self.p}, q={self.q}")

    @property
    def symmetric(self) -> bool:
        return self.xi_p == -self.xi_q


def solve_standard_quantile(family: GeneratorFamily, level: float) -> float:
    """Invert the standardized CDF by bracket expansion from ±1 followed by Brent's method."""
    cdf = family.standard_cdf
    lo, hi = -1.0, 1.0
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        if cdf(lo) <= level:
            break
        lo *= 2.0
    else:
        raise DomainError(f"{family.describe()}: cannot bracket quantile {level}")
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        if cdf(hi) >= level:
            break
        hi *= 2.0
    else:
        raise DomainError(f"{family.describe()}: cannot bracket quantile {level}")

    logger.debug(f"{family.describe()}: brentq for level {level} on [{lo}, {hi}]")
    return float(
        optimize.brentq(lambda y: cdf(y) - level, lo, hi, xtol=settings.quantile_xtol)
    )


@dataclass(frozen=True)
class EllipticalDistribution:
    """X = μ + σY where Y has density c₁·g₁(½y²)."""

    mu: float
    sigma: float
    family: GeneratorFamily

    def __post_init__(self) -> None:
        if not math.isfinite(self.mu):
            raise DomainError(f"location must be finite, got mu={self.mu}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError(f"scale must be finite and > 0, got sigma={self.sigma}")

    def standardize(self, x: float) -> float:
        return (x - self.mu) / self.sigma

    def pdf(self, x: float) -> float:
        return self.family.density(self.standardize(x)) / self.sigma

    def cdf(self, x: float) -> float:
        return self.family.standard_cdf(self.standardize(x))

    def cdf_by_quadrature(self, x: float) -> float:
        return self.family.quadrature_cdf(self.standardize(x))

    def standard_quantile(self, level: float) -> float:
        if not (0.0 < level < 1.0):
            raise DomainError(f"quantile level must lie in (0, 1), got {level}")
        closed = self.family.standard_ppf(level)
        if closed is not None:
            return closed
        return solve_standard_quantile(self.family, level)

    def quantile(self, level: float) -> float:
        return self.mu + self.sigma * self.standard_quantile(level)

    def truncated_prob(self, a: float, b: float) -> float:
        """P(a <= X <= b)."""
        if a > b:
            raise DomainError(f"truncated_prob requires a <= b, got a={a}, b={b}")
        return self.family.interval_prob(self.standardize(a), self.standardize(b))

    def window(self, p: float, q: float) -> TruncationWindow:
        """Resolve the quantile window [x_p, x_q]; p = 0 and q = 1 give infinite bounds."""
        if not (0.0 <= p < q <= 1.0):
            raise DomainError(f"window requires 0 <= p < q <= 1, got p={p}, q={q}")

        if abs(p + q - 1.0) <= _SYMMETRY_TOL:
            xi_q = math.inf if q == 1.0 else self.standard_quantile(q)
            xi_p = -xi_q
        else:
            xi_p = -math.inf if p == 0.0 else self.standard_quantile(p)
            xi_q = math.inf if q == 1.0 else self.standard_quantile(q)

        return TruncationWindow(
            p=p,
            q=q,
            x_p=self.mu + self.sigma * xi_p,
            x_q=self.mu + self.sigma * xi_q,
            xi_p=xi_p,
            xi_q=xi_q,
        )


def pdf(dist: EllipticalDistribution, x: float) -> float:
    return dist.pdf(x)


def cdf(dist: EllipticalDistribution, x: float) -> float:
    return dist.cdf(x)


def quantile(dist: EllipticalDistribution, level: float) -> float:
    return dist.quantile(level)


def truncated_prob(dist: EllipticalDistribution, a: float, b: float) -> float:
    return dist.truncated_prob(a, b)


def make_window(dist: EllipticalDistribution, p: float, q: float) -> TruncationWindow:
    return dist.window(p, q)
