"""Gamma, Beta, standard normal and the generalized Hurwitz-Lerch zeta function."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

from scipy import special

from dtmrisk.config import settings
from dtmrisk.exceptions import AccuracyError, DomainError
from dtmrisk.specfun.quadrature import quad_with_error

logger = logging.getLogger("dtmrisk.specfun")

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_MAX_SERIES_TERMS = 200_000


def gamma_fn(x: float) -> float:
    """Gamma function on the positive reals."""
    if not x > 0.0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return float(special.gamma(x))


def beta_fn(a: float, b: float) -> float:
    """Beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b) for a, b > 0."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"beta_fn requires a > 0 and b > 0, got a={a}, b={b}")
    return float(special.beta(a, b))


def std_normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / _SQRT_2PI


def std_normal_cdf(x: float) -> float:
    return float(special.ndtr(x))


@dataclass(frozen=True)
class HurwitzLerchArgs:
    """Arguments of Ψ*_κ(z, s, a) = Σ (κ)_n / n! · zⁿ / (n + a)^s."""

    z: float
    s: float
    a: float
    kappa: float = 1.0

    def __post_init__(self) -> None:
        for name in ("z", "s", "a", "kappa"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"hurwitz_lerch: {name} must be finite")
        if abs(self.z) > 1.0:
            raise DomainError(f"hurwitz_lerch requires |z| <= 1, got z={self.z}")
        if self.s <= 0.0:
            raise DomainError(f"hurwitz_lerch requires s > 0, got s={self.s}")
        if self.a <= 0.0:
            raise DomainError(f"hurwitz_lerch requires a > 0, got a={self.a}")
        if self.kappa <= 0.0:
            raise DomainError(f"hurwitz_lerch requires kappa > 0, got kappa={self.kappa}")
        if self.z == 1.0 and self.s <= self.kappa:
            raise DomainError(
                f"hurwitz_lerch diverges at z=1 unless s > kappa (s={self.s}, kappa={self.kappa})"
            )


def alternating_sum(terms: Sequence[float]) -> float:
    """Sum Σ (-1)^k terms[k] with the Cohen-Villegas-Zagier accelerator.

    Exact for the Abel sum of moment-like sequences, including ones that grow
    polynomially and therefore have no classical limit.
    """
    n = len(terms)
    d = (3.0 + math.sqrt(8.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b = -1.0
    c = -d
    weighted = []
    for k, term in enumerate(terms):
        c = b - c
        weighted.append(c * term)
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return math.fsum(weighted) / d


def _series_terms(args: HurwitzLerchArgs, count: int) -> list[float]:
    terms = []
    coeff = 1.0
    for n in range(count):
        terms.append(coeff / (n + args.a) ** args.s)
        coeff *= (args.kappa + n) / (n + 1.0)
    return terms


def _power_series(args: HurwitzLerchArgs) -> float:
    """Direct compensated summation, valid for |z| < 1."""
    terms = []
    running = 0.0
    coeff = 1.0
    zn = 1.0
    for n in range(_MAX_SERIES_TERMS):
        term = coeff * zn / (n + args.a) ** args.s
        terms.append(term)
        running += term
        # ratio of successive terms is below one once n exceeds kappa
        if n > args.kappa and abs(term) < 1e-16 * abs(running):
            return math.fsum(terms)
        coeff *= (args.kappa + n) / (n + 1.0)
        zn *= args.z
    raise AccuracyError(
        f"hurwitz_lerch series did not converge for {args}", estimate=math.fsum(terms)
    )


def _series_within_budget(args: HurwitzLerchArgs) -> bool:
    """Whether the series term, about n^(kappa - 1 - s) |z|^n, falls below 1e-17 in budget."""
    n = float(_MAX_SERIES_TERMS)
    log_term = (args.kappa - 1.0 - args.s) * math.log(n) + n * math.log(abs(args.z))
    return log_term < math.log(1e-17)


def hurwitz_lerch_integral(args: HurwitzLerchArgs) -> float:
    """Ψ*_κ(z, s, a) from its integral representation.

    (1/Γ(s)) ∫₀^∞ t^(s-1) e^(-a t) / (1 - z e^(-t))^κ dt, integrated after t = u².
    """
    s, a, z, kappa = args.s, args.a, args.z, args.kappa

    def integrand(u: float) -> float:
        t = u * u
        return 2.0 * u ** (2.0 * s - 1.0) * math.exp(-a * t) / (1.0 - z * math.exp(-t)) ** kappa

    head, _ = quad_with_error(integrand, 0.0, 4.0, epsabs=1e-15, epsrel=1e-13, split=None)
    tail, _ = quad_with_error(integrand, 4.0, math.inf, epsabs=1e-15, epsrel=1e-13, split=None)
    return (head + tail) / gamma_fn(s)


def hurwitz_lerch(args: HurwitzLerchArgs) -> float:
    """Generalized Hurwitz-Lerch zeta function Ψ*_κ(z, s, a).

    z = -1 is summed in the Abel sense via :func:`alternating_sum`; this is the value
    the logistic normalizers need even where the plain series diverges.
    """
    if args.z == 0.0:
        return args.a ** (-args.s)
    if args.z == -1.0:
        return alternating_sum(_series_terms(args, settings.hurwitz_terms))
    if args.z == 1.0:
        if args.kappa == 1.0:
            return float(special.zeta(args.s, args.a))
        logger.debug(f"hurwitz_lerch at z=1 with kappa={args.kappa}: using integral form")
        return hurwitz_lerch_integral(args)
    if _series_within_budget(args):
        try:
            return _power_series(args)
        except AccuracyError:
            pass
    logger.debug(f"hurwitz_lerch series too slow for {args}: using integral form")
    return hurwitz_lerch_integral(args)
