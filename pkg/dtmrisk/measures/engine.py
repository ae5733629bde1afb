"""Closed-form doubly truncated moments: DTE, DTV, DTS, DTK, n-th DTM, TCM and central moments.

Everything is computed for the standardized variable Y on [ξ_p, ξ_q] and mapped back
to X = μ + σY. Integration by parts reduces E[Yⁱ | window] to boundary terms in Ḡ₍₁₎,
Ḡ₍₂₎ and the truncated masses of the derived variables Y₍₁₎, Y₍₂₎.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from dtmrisk.config import settings
from dtmrisk.distribution.elliptical import EllipticalDistribution, TruncationWindow
from dtmrisk.exceptions import DegenerateWindowError, DomainError, UnsupportedOrderError
from dtmrisk.generators.families import GeneratorFamily
from dtmrisk.models.report import RiskReport
from dtmrisk.specfun.quadrature import adaptive_quad

logger = logging.getLogger("dtmrisk.measures")

MEASURE_ORDERS = {"dte": 1, "dtv": 2, "dts": 3, "dtk": 4}


@dataclass(frozen=True)
class LTerms:
    """Boundary and derived-mass terms of the standardized truncated moments.

    ``l1``/``l2`` give the second moment, the starred pair the third and the double-starred
    pair the fourth. Terms above the requested order are None.
    """

    mass: float
    dte_std: float
    l1: float | None = None
    l2: float | None = None
    l1_star: float | None = None
    l2_star: float | None = None
    l1_dstar: float | None = None
    l2_dstar: float | None = None
    ratio1: float | None = None
    ratio2: float | None = None

    @property
    def second_moment(self) -> float:
        return self.l1 + self.ratio1 * self.l2

    @property
    def third_moment(self) -> float:
        return self.l1_star + 2.0 * self.l2_star

    @property
    def fourth_moment(self) -> float:
        return self.l1_dstar + 3.0 * self.l2_dstar


def _edge(family: GeneratorFamily, k: int, xi: float) -> float:
    """Ḡ₍ₖ₎(½ξ²), zero at an infinite bound."""
    if math.isinf(xi):
        return 0.0
    return family.gbar(k, 0.5 * xi * xi)


def _boundary(family: GeneratorFamily, window: TruncationWindow, k: int, power: int) -> float:
    """ξ_pᵖ Ḡ₍ₖ₎(½ξ_p²) - ξ_qᵖ Ḡ₍ₖ₎(½ξ_q²) with infinite bounds contributing zero."""
    total = 0.0
    for xi, sign in ((window.xi_p, 1.0), (window.xi_q, -1.0)):
        if math.isinf(xi):
            continue
        total += sign * xi**power * _edge(family, k, xi)
    return total


def _window_mass(family: GeneratorFamily, window: TruncationWindow) -> float:
    mass = family.interval_prob(window.xi_p, window.xi_q)
    if mass < settings.degenerate_mass:
        raise DegenerateWindowError(
            f"window [{window.p}, {window.q}] carries mass {mass:.3e} "
            f"below {settings.degenerate_mass:.0e}"
        )
    return mass


def _require_term(family: GeneratorFamily, term: str, order: int) -> None:
    try:
        family.require_moment(order)
    except UnsupportedOrderError as exc:
        raise UnsupportedOrderError(f"{term} unavailable: {exc}") from exc


def lterms(family: GeneratorFamily, window: TruncationWindow, order: int = 4) -> LTerms:
    """Evaluate the terms needed for standardized moments up to ``order`` (1 to 4)."""
    if order not in (1, 2, 3, 4):
        raise DomainError(f"lterms order must be 1..4, got {order}")

    _require_term(family, "DTE", 1)
    mass = _window_mass(family, window)
    c1 = family.normalizer(0)
    values: dict[str, float] = {
        "mass": mass,
        "dte_std": c1 * _boundary(family, window, 1, 0) / mass,
    }

    if order >= 2:
        _require_term(family, "L2", 2)
        values["l1"] = c1 * _boundary(family, window, 1, 1) / mass
        values["l2"] = family.derived_interval(1, window.xi_p, window.xi_q) / mass
        values["ratio1"] = family.normalizer_ratio(1)
    if order >= 3:
        _require_term(family, "L2*", 3)
        values["l1_star"] = c1 * _boundary(family, window, 1, 2) / mass
        values["l2_star"] = c1 * _boundary(family, window, 2, 0) / mass
    if order >= 4:
        _require_term(family, "L2**", 4)
        ratio2 = family.normalizer_ratio(2)
        values["l1_dstar"] = c1 * _boundary(family, window, 1, 3) / mass
        values["l2_dstar"] = (
            c1 * _boundary(family, window, 2, 1) / mass
            + ratio2 * family.derived_interval(2, window.xi_p, window.xi_q) / mass
        )
        values["ratio2"] = ratio2

    return LTerms(**values)


def _higher_moment(
    family: GeneratorFamily, window: TruncationWindow, mass: float, i: int
) -> float:
    """E[Yⁱ | window] for i > 4: one integration by parts, remainder by quadrature."""
    if window.symmetric and i % 2:
        return 0.0
    c1 = family.normalizer(0)

    def integrand(y: float) -> float:
        tail = family.gbar(1, 0.5 * y * y)
        return 0.0 if tail == 0.0 else y ** (i - 2) * tail

    remainder = adaptive_quad(integrand, window.xi_p, window.xi_q)
    return c1 * (_boundary(family, window, 1, i - 1) + (i - 1) * remainder) / mass


def standardized_moments(
    family: GeneratorFamily, window: TruncationWindow, n: int
) -> list[float]:
    """[E[Y⁰ | window], ..., E[Yⁿ | window]]."""
    if n < 1:
        raise DomainError(f"moment order must be >= 1, got {n}")
    family.require_moment(n)
    terms = lterms(family, window, order=min(n, 4))

    moments = [1.0, terms.dte_std]
    if n >= 2:
        moments.append(terms.second_moment)
    if n >= 3:
        moments.append(terms.third_moment)
    if n >= 4:
        moments.append(terms.fourth_moment)
    for i in range(5, n + 1):
        moments.append(_higher_moment(family, window, terms.mass, i))
    return moments


def _central(moments: Sequence[float], n: int) -> float:
    m1 = moments[1]
    return math.fsum(math.comb(n, k) * (-m1) ** (n - k) * moments[k] for k in range(n + 1))


def _raw_error_scale(
    family: GeneratorFamily,
    window: TruncationWindow,
    moments: Sequence[float],
    mass: float,
    k: int,
) -> float:
    """Magnitude that the rounding error of E[Yᵏ | window] is proportional to."""
    if k == 0:
        return 1.0
    edges = math.fsum(
        abs(xi) ** (k - 1) * _edge(family, 1, xi)
        for xi in (window.xi_p, window.xi_q)
        if not math.isinf(xi)
    )
    return abs(moments[k]) + family.normalizer(0) * edges / mass


def _recombination_error(
    family: GeneratorFamily,
    window: TruncationWindow,
    moments: Sequence[float],
    central: Sequence[float],
) -> float:
    """Estimated relative error of central moments recombined from raw moments about 0.

    Raw moments of a window far from the origin are large next to its spread, so the
    binomial sum cancels; the loss grows like (|E[Y]| / sd)ⁿ.
    """
    c2 = central[2]
    if not c2 > 0.0:
        return math.inf
    mass = _window_mass(family, window)
    m1 = abs(moments[1])
    scales = [_raw_error_scale(family, window, moments, mass, k) for k in range(len(moments))]
    worst = 0.0
    for n in range(2, len(moments)):
        spread = math.fsum(math.comb(n, k) * m1 ** (n - k) * scales[k] for k in range(n + 1))
        worst = max(worst, spread / c2 ** (n / 2))
    return settings.quad_epsrel * worst


def _central_by_quadrature(
    family: GeneratorFamily, window: TruncationWindow, center: float, n: int
) -> list[float]:
    """Central moments by integrating (y - center)ᵏ c₁g₁(½y²) over the window."""
    c1 = family.normalizer(0)

    def weighted(k: int):
        def integrand(y: float) -> float:
            density = family.g1(0.5 * y * y)
            return 0.0 if density == 0.0 else (y - center) ** k * c1 * density

        return integrand

    a, b = window.xi_p, window.xi_q
    mass = adaptive_quad(weighted(0), a, b, epsabs=0.0)
    second = adaptive_quad(weighted(2), a, b, epsabs=0.0) / mass
    if not second > 0.0:
        raise DegenerateWindowError(
            f"window [{window.p}, {window.q}] too narrow for a stable variance ({second:.3e})"
        )

    shifted = [1.0]
    for k in range(1, n + 1):
        if k == 2:
            shifted.append(second)
            continue
        if window.symmetric and center == 0.0 and k % 2:
            shifted.append(0.0)
            continue
        floor = settings.quad_epsrel * mass * second ** (k / 2)
        shifted.append(adaptive_quad(weighted(k), a, b, epsabs=floor) / mass)

    # recentre on the integrated mean; the shift is tiny next to the spread
    return [1.0, 0.0] + [_central(shifted, k) for k in range(2, n + 1)]


def _central_moments(
    family: GeneratorFamily, window: TruncationWindow, moments: Sequence[float]
) -> list[float]:
    """[1, 0, E[(Y - E[Y|w])² | w], ...] up to the order of ``moments``."""
    n = len(moments) - 1
    central = [1.0, 0.0] + [_central(moments, k) for k in range(2, n + 1)]
    error = _recombination_error(family, window, moments, central)
    if error > settings.cancellation_tolerance:
        logger.debug(
            f"window [{window.p}, {window.q}]: raw recombination error {error:.1e}, "
            f"integrating central moments directly"
        )
        central = _central_by_quadrature(family, window, moments[1], n)
    if not central[2] > 0.0:
        raise DegenerateWindowError(
            f"window [{window.p}, {window.q}] too narrow for a stable variance ({central[2]:.3e})"
        )
    return central


def _check_order(n: int, minimum: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < minimum:
        raise DomainError(f"order must be an integer >= {minimum}, got {n!r}")


def dte_standardized(family: GeneratorFamily, window: TruncationWindow) -> float:
    """E[Y | ξ_p <= Y <= ξ_q] for the standardized variable."""
    family.require_moment(1)
    return lterms(family, window, order=1).dte_std


def dte(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    """Doubly truncated expectation E[X | x_p <= X <= x_q]."""
    return dist.mu + dist.sigma * dte_standardized(dist.family, window)


def raw_truncated_moment(dist: EllipticalDistribution, window: TruncationWindow, n: int) -> float:
    """E[Xⁿ | window] = Σᵢ C(n, i) μⁿ⁻ⁱ σⁱ E[Yⁱ | window]."""
    _check_order(n, 1)
    moments = standardized_moments(dist.family, window, n)
    mu, sigma = dist.mu, dist.sigma
    return math.fsum(
        math.comb(n, i) * mu ** (n - i) * sigma**i * moments[i] for i in range(n + 1)
    )


def dtm(dist: EllipticalDistribution, window: TruncationWindow, n: int) -> float:
    """n-th doubly truncated central moment E[(X - DTE)ⁿ | window]."""
    _check_order(n, 2)
    moments = standardized_moments(dist.family, window, n)
    return dist.sigma**n * _central_moments(dist.family, window, moments)[n]


def dtv(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    return dtm(dist, window, 2)


def dts(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    """Doubly truncated skewness; invariant to μ and σ."""
    moments = standardized_moments(dist.family, window, 3)
    central = _central_moments(dist.family, window, moments)
    return central[3] / central[2] ** 1.5


def dtk(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    """Doubly truncated excess kurtosis; invariant to μ and σ."""
    moments = standardized_moments(dist.family, window, 4)
    central = _central_moments(dist.family, window, moments)
    return central[4] / central[2] ** 2 - 3.0


def tce(dist: EllipticalDistribution, p: float) -> float:
    """Tail conditional expectation E[X | X >= x_p]."""
    return dte(dist, dist.window(p, 1.0))


def tcm(dist: EllipticalDistribution, p: float, n: int) -> float:
    """Tail conditional moment; order 1 is the TCE, higher orders are central."""
    _check_order(n, 1)
    if n == 1:
        return tce(dist, p)
    return dtm(dist, dist.window(p, 1.0), n)


def central_moment(dist: EllipticalDistribution, n: int) -> float:
    """Untruncated central moment E[(X - μ)ⁿ]."""
    _check_order(n, 1)
    if n == 1:
        dist.family.require_moment(1)
        return 0.0
    return dtm(dist, dist.window(0.0, 1.0), n)


# Data-coordinate forms. These repeat the recombination with μ, σ and DTE(X) kept
# explicit and serve as cross-checks of the standardized path.


def _pieces(dist: EllipticalDistribution, window: TruncationWindow, n: int):
    moments = standardized_moments(dist.family, window, n)
    d = dist.mu + dist.sigma * moments[1]
    return moments, d


def _linear_part(mu: float, sigma: float, m1: float, d: float, n: int) -> float:
    """Σ_{k=2}^{n} C(n,k)(-D)^{n-k}[μᵏ + kμ^{k-1}σ E[Y|window]]."""
    return math.fsum(
        math.comb(n, k) * (-d) ** (n - k) * (mu**k + k * mu ** (k - 1) * sigma * m1)
        for k in range(2, n + 1)
    )


def dtv_expanded(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    moments, d = _pieces(dist, window, 2)
    mu, sigma = dist.mu, dist.sigma
    return math.fsum(
        [-d * d, mu * mu, 2.0 * mu * sigma * moments[1], sigma**2 * moments[2]]
    )


def dts_expanded(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    moments, d = _pieces(dist, window, 3)
    mu, sigma = dist.mu, dist.sigma
    third = math.fsum(
        [
            2.0 * d**3,
            _linear_part(mu, sigma, moments[1], d, 3),
            3.0 * (mu - d) * sigma**2 * moments[2],
            sigma**3 * moments[3],
        ]
    )
    return third / dtv_expanded(dist, window) ** 1.5


def dtk_expanded(dist: EllipticalDistribution, window: TruncationWindow) -> float:
    moments, d = _pieces(dist, window, 4)
    mu, sigma = dist.mu, dist.sigma
    fourth = math.fsum(
        [
            -3.0 * d**4,
            6.0 * (mu - d) ** 2 * sigma**2 * moments[2],
            _linear_part(mu, sigma, moments[1], d, 4),
            4.0 * (mu - d) * sigma**3 * moments[3],
            sigma**4 * moments[4],
        ]
    )
    return fourth / dtv_expanded(dist, window) ** 2 - 3.0


def dtm_expanded(dist: EllipticalDistribution, window: TruncationWindow, n: int) -> float:
    """n-th DTM from the raw moments of X, leading terms (-D)ⁿ and n(-1)ⁿ⁻¹Dⁿ split out."""
    _check_order(n, 2)
    moments, d = _pieces(dist, window, n)
    mu, sigma = dist.mu, dist.sigma
    parts = [(-1.0) ** n * d**n, (-1.0) ** (n - 1) * n * d**n]
    parts.append(_linear_part(mu, sigma, moments[1], d, n))
    for k in range(2, n + 1):
        for i in range(2, k + 1):
            parts.append(
                math.comb(n, k)
                * math.comb(k, i)
                * (-d) ** (n - k)
                * mu ** (k - i)
                * sigma**i
                * moments[i]
            )
    return math.fsum(parts)


def conditioning_warnings(family: GeneratorFamily, order: int) -> list[str]:
    margin = family.moment_margin(order)
    if margin >= settings.conditioning_margin:
        return []
    message = (
        f"{family.describe()}: order {order} lies {margin:.3g} from the moment-existence "
        f"boundary; results are ill-conditioned"
    )
    logger.warning(message)
    return [message]


def risk_report(
    dist: EllipticalDistribution,
    window: TruncationWindow,
    measures: Iterable[str] = ("dte", "dtv", "dts", "dtk"),
    dtm_orders: Iterable[int] = (),
) -> RiskReport:
    """Evaluate the requested measures on one window.

    The highest moment order any requested measure needs is validated before anything
    is computed, so an unsupported request fails as a whole.
    """
    measures = [m.strip().lower() for m in measures]
    unknown = [m for m in measures if m not in MEASURE_ORDERS]
    if unknown:
        raise DomainError(f"unknown measure(s): {', '.join(unknown)}")
    dtm_orders = sorted(set(dtm_orders))
    for n in dtm_orders:
        _check_order(n, 2)

    max_order = max([MEASURE_ORDERS[m] for m in measures] + dtm_orders + [1])
    family = dist.family
    family.require_moment(max_order)

    moments = standardized_moments(family, window, max_order)
    sigma = dist.sigma
    values: dict[str, float] = {}
    if "dte" in measures:
        values["dte"] = dist.mu + sigma * moments[1]
    central = _central_moments(family, window, moments) if max_order >= 2 else []
    if "dtv" in measures:
        values["dtv"] = sigma**2 * central[2]
    if "dts" in measures:
        values["dts"] = central[3] / central[2] ** 1.5
    if "dtk" in measures:
        values["dtk"] = central[4] / central[2] ** 2 - 3.0

    return RiskReport(
        family=family.describe(),
        mu=dist.mu,
        sigma=sigma,
        p=window.p,
        q=window.q,
        x_p=window.x_p,
        x_q=window.x_q,
        dtm={n: sigma**n * central[n] for n in dtm_orders},
        warnings=conditioning_warnings(family, max_order),
        **values,
    )
