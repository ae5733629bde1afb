"""Generator families: g₁, cumulative generators Ḡ₍₁₎, Ḡ₍₂₎, normalizers and derived CDFs."""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import ClassVar

import numpy as np
from scipy import special

from dtmrisk.exceptions import AccuracyError, DomainError, UnsupportedOrderError
from dtmrisk.specfun.functions import HurwitzLerchArgs, gamma_fn, hurwitz_lerch
from dtmrisk.specfun.quadrature import adaptive_quad, quad_with_error

logger = logging.getLogger("dtmrisk.generators")

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class FamilyKind(str, Enum):
    NORMAL = "normal"
    STUDENT_T = "student-t"
    LOGISTIC = "logistic"
    LAPLACE = "laplace"
    PEARSON_VII = "pearson-vii"
    CUSTOM = "custom"


def _check_u(u: float) -> float:
    u = float(u)
    if math.isnan(u) or u < 0.0:
        raise DomainError(f"generator argument must be >= 0, got {u}")
    return u


def _check_level(level: int) -> None:
    if level not in (0, 1, 2):
        raise DomainError(f"normalizer level must be 0, 1 or 2, got {level}")


def _interval(cdf: Callable[[float], float], a: float, b: float) -> float:
    """P(a <= Y <= b) for a symmetric variable, taken from the smaller tail."""
    if a >= 0.0:
        value = cdf(-a) - cdf(-b)
    else:
        value = cdf(b) - cdf(a)
    return min(max(value, 0.0), 1.0)


class GeneratorFamily(ABC):
    """A density generator g₁ together with its cumulative generators and normalizers.

    The standardized variable Y has density c₁·g₁(½y²); Y₍ₖ₎ has density c*₍ₖ₎·Ḡ₍ₖ₎(½y²).
    Subclasses provide closed forms; anything they leave out falls back to quadrature.
    """

    kind: ClassVar[FamilyKind]

    @property
    def label(self) -> str:
        return self.kind.value

    def describe(self) -> str:
        return self.label

    # -- subclass hooks -------------------------------------------------

    @abstractmethod
    def _g1(self, u):
        """g₁ on a scalar or numpy array, no validation."""

    @abstractmethod
    def _gbar(self, k: int, u):
        """Ḡ₍ₖ₎ on a scalar or numpy array, no validation."""

    @abstractmethod
    def _normalizer(self, level: int) -> float:
        """c₁ for level 0, c*₍ₖ₎ for level k."""

    def _standard_cdf_closed(self, y: float) -> float | None:
        return None

    def _derived_cdf_closed(self, k: int, y: float) -> float | None:
        return None

    def standard_ppf(self, level: float) -> float | None:
        """Closed-form quantile of Y, or None when only root-finding works."""
        return None

    def require_moment(self, n: int, what: str | None = None) -> None:
        """Raise UnsupportedOrderError if E|Y|ⁿ is infinite for these parameters."""

    def moment_margin(self, n: int) -> float:
        """Distance to the moment-existence boundary in degrees-of-freedom units."""
        return math.inf

    # -- public surface -------------------------------------------------

    def g1(self, u: float) -> float:
        u = _check_u(u)
        if math.isinf(u):
            return 0.0
        return float(self._g1(u))

    def g1_array(self, u: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", under="ignore"):
            return np.asarray(self._g1(np.asarray(u, dtype=float)), dtype=float)

    def gbar(self, k: int, u: float) -> float:
        if k not in (1, 2):
            raise DomainError(f"cumulative generator order must be 1 or 2, got {k}")
        self.require_moment(2 * k - 1, what=f"cumulative generator G({k})")
        u = _check_u(u)
        if math.isinf(u):
            return 0.0
        return float(self._gbar(k, u))

    def normalizer(self, level: int) -> float:
        _check_level(level)
        if level:
            self.require_moment(2 * level, what=f"normalizer c*({level})")
        return _cached_normalizer(self, level)

    def normalizer_ratio(self, k: int) -> float:
        """c₁ / c*₍ₖ₎."""
        return self.normalizer(0) / self.normalizer(k)

    def density(self, y: float) -> float:
        """Density of the standardized variable Y."""
        return self.normalizer(0) * self.g1(0.5 * y * y)

    def quadrature_cdf(self, y: float, level: int = 0) -> float:
        """CDF of Y (level 0) or Y₍ₖ₎ (level k) by quadrature of its density."""
        if y == -math.inf:
            return 0.0
        if y == math.inf:
            return 1.0
        norm = self.normalizer(level)
        if level == 0:
            kernel = self.g1
        else:
            kernel = lambda u: self.gbar(level, u)  # noqa: E731
        tail = adaptive_quad(lambda s: norm * kernel(0.5 * s * s), -math.inf, -abs(y), split=None)
        return tail if y <= 0.0 else 1.0 - tail

    def standard_cdf(self, y: float) -> float:
        closed = self._standard_cdf_closed(y) if math.isfinite(y) else None
        if closed is not None:
            return closed
        return self.quadrature_cdf(y)

    def derived_cdf(self, k: int, y: float) -> float:
        if k not in (1, 2):
            raise DomainError(f"derived variable order must be 1 or 2, got {k}")
        self.normalizer(k)
        return _cached_derived_cdf(self, k, float(y))

    def interval_prob(self, a: float, b: float) -> float:
        """F_Y over [a, b]."""
        if a > b:
            raise DomainError(f"interval requires a <= b, got a={a}, b={b}")
        return _interval(self.standard_cdf, a, b)

    def derived_interval(self, k: int, a: float, b: float) -> float:
        """F_Y₍ₖ₎ over [a, b]."""
        if a > b:
            raise DomainError(f"interval requires a <= b, got a={a}, b={b}")
        return _interval(lambda y: self.derived_cdf(k, y), a, b)


@lru_cache(maxsize=512)
def _cached_normalizer(family: GeneratorFamily, level: int) -> float:
    value = float(family._normalizer(level))
    if not (math.isfinite(value) and value > 0.0):
        raise AccuracyError(f"{family.describe()}: normalizer level {level} = {value}", value)
    return value


@lru_cache(maxsize=8192)
def _cached_derived_cdf(family: GeneratorFamily, k: int, y: float) -> float:
    if math.isinf(y):
        return 0.0 if y < 0 else 1.0
    closed = family._derived_cdf_closed(k, y)
    if closed is not None:
        return closed
    logger.debug(f"{family.describe()}: derived cdf Y({k}) at {y} by quadrature")
    return family.quadrature_cdf(y, level=k)


@dataclass(frozen=True)
class NormalFamily(GeneratorFamily):
    kind: ClassVar[FamilyKind] = FamilyKind.NORMAL

    def _g1(self, u):
        return np.exp(-u)

    def _gbar(self, k, u):
        return np.exp(-u)

    def _normalizer(self, level):
        return 1.0 / _SQRT_2PI

    def normalizer_ratio(self, k):
        self.normalizer(k)
        return 1.0

    def _standard_cdf_closed(self, y):
        return float(special.ndtr(y))

    def _derived_cdf_closed(self, k, y):
        return float(special.ndtr(y))

    def standard_ppf(self, level):
        return float(special.ndtri(level))


@dataclass(frozen=True)
class StudentTFamily(GeneratorFamily):
    """Student-t with m degrees of freedom."""

    m: float
    kind: ClassVar[FamilyKind] = FamilyKind.STUDENT_T

    def __post_init__(self) -> None:
        if not (math.isfinite(self.m) and self.m > 0.0):
            raise DomainError(f"student-t requires m > 0, got m={self.m}")

    def describe(self) -> str:
        return f"student-t(m={self.m:g})"

    def require_moment(self, n, what=None):
        if not self.m > n:
            what = what or f"moment of order {n}"
            raise UnsupportedOrderError(
                f"{self.describe()}: {what} requires m > {n}"
            )

    def moment_margin(self, n):
        return self.m - n

    def _base(self, u):
        return 1.0 + 2.0 * u / self.m

    def _g1(self, u):
        return np.power(self._base(u), -(self.m + 1.0) / 2.0)

    def _gbar(self, k, u):
        m = self.m
        if k == 1:
            return m / (m - 1.0) * np.power(self._base(u), -(m - 1.0) / 2.0)
        return m * m / ((m - 1.0) * (m - 3.0)) * np.power(self._base(u), -(m - 3.0) / 2.0)

    def _normalizer(self, level):
        m = self.m
        if level == 0:
            return math.exp(-special.betaln(0.5, m / 2.0)) / math.sqrt(m)
        if level == 1:
            return (m - 1.0) / m**1.5 * math.exp(-special.betaln(0.5, (m - 2.0) / 2.0))
        return (m - 1.0) * (m - 3.0) / m**2.5 * math.exp(-special.betaln(0.5, (m - 4.0) / 2.0))

    def normalizer_ratio(self, k):
        self.normalizer(k)
        m = self.m
        if k == 1:
            return m / (m - 2.0)
        return m * m / ((m - 2.0) * (m - 4.0))

    def _standard_cdf_closed(self, y):
        return float(special.stdtr(self.m, y))

    def _derived_cdf_closed(self, k, y):
        nu = self.m - 2.0 * k
        return float(special.stdtr(nu, y * math.sqrt(nu / self.m)))

    def standard_ppf(self, level):
        return float(special.stdtrit(self.m, level))


@dataclass(frozen=True)
class LogisticFamily(GeneratorFamily):
    """Logistic generator; normalizers come from the Hurwitz-Lerch zeta at z = -1."""

    kind: ClassVar[FamilyKind] = FamilyKind.LOGISTIC

    def _g1(self, u):
        w = np.exp(-u)
        return w / (1.0 + w) ** 2

    def _gbar(self, k, u):
        if k == 1:
            return special.expit(-u)
        return np.log1p(np.exp(-u))

    def _normalizer(self, level):
        if level == 0:
            psi = hurwitz_lerch(HurwitzLerchArgs(z=-1.0, s=0.5, a=1.0, kappa=2.0))
        elif level == 1:
            psi = hurwitz_lerch(HurwitzLerchArgs(z=-1.0, s=0.5, a=1.0, kappa=1.0))
        else:
            psi = hurwitz_lerch(HurwitzLerchArgs(z=-1.0, s=1.5, a=1.0, kappa=1.0))
        return 1.0 / (_SQRT_2PI * psi)


@dataclass(frozen=True)
class LaplaceFamily(GeneratorFamily):
    kind: ClassVar[FamilyKind] = FamilyKind.LAPLACE

    def _g1(self, u):
        return np.exp(-np.sqrt(2.0 * u))

    def _gbar(self, k, u):
        r = np.sqrt(2.0 * u)
        if k == 1:
            return (1.0 + r) * np.exp(-r)
        return (3.0 + 2.0 * u + 3.0 * r) * np.exp(-r)

    def _normalizer(self, level):
        return (0.5, 0.25, 0.0625)[level]

    def normalizer_ratio(self, k):
        self.normalizer(k)
        return (1.0, 2.0, 8.0)[k]

    @staticmethod
    def _upper_tail(k: int, y: float) -> float:
        # P(Y(k) > y) for y >= 0
        if k == 0:
            return 0.5 * math.exp(-y)
        if k == 1:
            return 0.25 * (2.0 + y) * math.exp(-y)
        return (y * y + 5.0 * y + 8.0) * math.exp(-y) / 16.0

    def _cdf(self, k: int, y: float) -> float:
        if y < 0.0:
            return self._upper_tail(k, -y)
        return 1.0 - self._upper_tail(k, y)

    def _standard_cdf_closed(self, y):
        return self._cdf(0, y)

    def _derived_cdf_closed(self, k, y):
        return self._cdf(k, y)

    def standard_ppf(self, level):
        if level < 0.5:
            return math.log(2.0 * level)
        return -math.log(2.0 * (1.0 - level))


@dataclass(frozen=True)
class PearsonVIIFamily(GeneratorFamily):
    """Pearson type VII with shape t; Y is a Student-t with 2t-1 dof scaled by its root."""

    t: float
    kind: ClassVar[FamilyKind] = FamilyKind.PEARSON_VII

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t) and self.t > 0.5):
            raise DomainError(f"pearson-vii requires t > 1/2, got t={self.t}")

    def describe(self) -> str:
        return f"pearson-vii(t={self.t:g})"

    def require_moment(self, n, what=None):
        bound = Fraction(n + 1, 2)
        if not self.t > bound:
            what = what or f"moment of order {n}"
            raise UnsupportedOrderError(f"{self.describe()}: {what} requires t > {bound}")

    def moment_margin(self, n):
        return 2.0 * self.t - 1.0 - n

    def _g1(self, u):
        return np.power(1.0 + 2.0 * u, -self.t)

    def _gbar(self, k, u):
        t = self.t
        if k == 1:
            return np.power(1.0 + 2.0 * u, -(t - 1.0)) / (2.0 * (t - 1.0))
        return np.power(1.0 + 2.0 * u, -(t - 2.0)) / (4.0 * (t - 1.0) * (t - 2.0))

    def _normalizer(self, level):
        t = self.t
        if level == 0:
            return math.exp(-special.betaln(0.5, t - 0.5))
        if level == 1:
            return 2.0 * (t - 1.0) * math.exp(-special.betaln(0.5, t - 1.5))
        return 4.0 * (t - 1.0) * (t - 2.0) * math.exp(-special.betaln(0.5, t - 2.5))

    def normalizer_ratio(self, k):
        self.normalizer(k)
        t = self.t
        if k == 1:
            return 1.0 / (2.0 * t - 3.0)
        return 1.0 / ((2.0 * t - 3.0) * (2.0 * t - 5.0))

    def _dof(self, k: int) -> float:
        return 2.0 * (self.t - k) - 1.0

    def _standard_cdf_closed(self, y):
        nu = self._dof(0)
        return float(special.stdtr(nu, y * math.sqrt(nu)))

    def _derived_cdf_closed(self, k, y):
        nu = self._dof(k)
        return float(special.stdtr(nu, y * math.sqrt(nu)))

    def standard_ppf(self, level):
        nu = self._dof(0)
        return float(special.stdtrit(nu, level)) / math.sqrt(nu)


@dataclass(frozen=True)
class CustomFamily(GeneratorFamily):
    """User-supplied generator g₁; every derived quantity comes from quadrature.

    ``generator`` must be a scalar function on [0, ∞) with ∫₀^∞ s^(-1/2) g₁(s) ds finite.
    """

    generator: Callable[[float], float]
    name: str = "custom"
    kind: ClassVar[FamilyKind] = FamilyKind.CUSTOM
    _finite_orders: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        g0 = self.generator(0.0)
        if not (math.isfinite(g0) and g0 > 0.0):
            raise DomainError(f"{self.name}: generator must be finite and positive at 0")
        _cached_normalizer(self, 0)

    def describe(self) -> str:
        return self.name

    def require_moment(self, n, what=None):
        if n <= 0:
            return
        if n not in self._finite_orders:
            self._finite_orders[n] = self._moment_is_finite(n)
        if not self._finite_orders[n]:
            what = what or f"moment of order {n}"
            raise UnsupportedOrderError(
                f"{self.name}: {what} requires a finite absolute moment of order {n}"
            )

    def _moment_is_finite(self, n: int) -> bool:
        def integrand(y: float) -> float:
            density = self.generator(0.5 * y * y)
            return 0.0 if density == 0.0 else y**n * density

        try:
            value, error = quad_with_error(integrand, 0.0, math.inf, split=None)
        except AccuracyError:
            return False
        return math.isfinite(value) and error <= 1e-6 * max(abs(value), 1.0)

    def _scalar_g1(self, u: float) -> float:
        return float(self.generator(u))

    def _scalar_gbar(self, k: int, u: float) -> float:
        if k == 1:
            return adaptive_quad(self.generator, u, math.inf, split=None)
        return adaptive_quad(lambda s: (s - u) * self.generator(s), u, math.inf, split=None)

    def _g1(self, u):
        if np.ndim(u) == 0:
            return self._scalar_g1(u)
        return np.vectorize(self._scalar_g1, otypes=[float])(u)

    def _gbar(self, k, u):
        if np.ndim(u) == 0:
            return self._scalar_gbar(k, u)
        return np.vectorize(lambda v: self._scalar_gbar(k, v), otypes=[float])(u)

    def _normalizer(self, level):
        # ∫ s^(-1/2) Ḡ₍ₖ₎(s) ds = Γ(1/2)/Γ(k+1/2) ∫ v^(k-1/2) g₁(v) dv, and v = r²
        def integrand(r: float) -> float:
            value = self.generator(r * r)
            return 0.0 if value == 0.0 else r ** (2 * level) * value

        moment = 2.0 * adaptive_quad(integrand, 0.0, math.inf, split=None)
        if not (math.isfinite(moment) and moment > 0.0):
            raise DomainError(f"{self.name}: generator does not define a proper density")
        return gamma_fn(level + 0.5) / (_SQRT_2PI * moment)


def g1(family: GeneratorFamily, u: float) -> float:
    return family.g1(u)


def gbar(family: GeneratorFamily, k: int, u: float) -> float:
    return family.gbar(k, u)


def normalizer(family: GeneratorFamily, level: int) -> float:
    return family.normalizer(level)


def derived_cdf_interval(family: GeneratorFamily, k: int, a: float, b: float) -> float:
    """F_Y₍ₖ₎(b) - F_Y₍ₖ₎(a) for the standardized derived variable Y₍ₖ₎."""
    return family.derived_interval(k, a, b)


def quadrature_normalizer(family: GeneratorFamily, level: int) -> float:
    """Normalizer from its defining integral, 1 / (√2 ∫₀^∞ s^(-1/2) Ḡ₍ₖ₎(s) ds)."""
    _check_level(level)
    if level == 0:
        kernel = family.g1
    else:
        family.require_moment(2 * level, what=f"normalizer c*({level})")
        kernel = lambda u: family.gbar(level, u)  # noqa: E731
    integral = 2.0 * adaptive_quad(lambda r: kernel(r * r), 0.0, math.inf, split=None)
    return 1.0 / (math.sqrt(2.0) * integral)


def make_family(
    name: str, dof: float | None = None, shape: float | None = None
) -> GeneratorFamily:
    """Build a family from its CLI name."""
    key = name.strip().lower().replace("_", "-")
    if key == FamilyKind.NORMAL.value:
        return NormalFamily()
    if key in (FamilyKind.STUDENT_T.value, "t", "studentt"):
        if dof is None:
            raise DomainError("student-t requires --dof")
        return StudentTFamily(m=dof)
    if key == FamilyKind.LOGISTIC.value:
        return LogisticFamily()
    if key == FamilyKind.LAPLACE.value:
        return LaplaceFamily()
    if key in (FamilyKind.PEARSON_VII.value, "pearsonvii"):
        if shape is None:
            raise DomainError("pearson-vii requires --shape")
        return PearsonVIIFamily(t=shape)
    raise DomainError(f"unknown family '{name}'")
