"""Adaptive quadrature wrapper shared by the production numerics."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

from scipy import integrate

from dtmrisk.config import settings
from dtmrisk.exceptions import AccuracyError

logger = logging.getLogger("dtmrisk.quadrature")


def quad_with_error(
    func: Callable[[float], float],
    a: float,
    b: float,
    *,
    epsabs: float | None = None,
    epsrel: float | None = None,
    limit: int | None = None,
    split: float | None = 0.0,
) -> tuple[float, float]:
    """Integrate ``func`` over [a, b], returning (value, absolute error estimate).

    Infinite bounds go through QUADPACK's infinite-range transform. The range is cut
    at ``split`` when it lies strictly inside, which keeps kinks and peaks at the
    centre of symmetric densities on a panel edge.
    """
    if a == b:
        return 0.0, 0.0
    if a > b:
        value, error = quad_with_error(
            func, b, a, epsabs=epsabs, epsrel=epsrel, limit=limit, split=split
        )
        return -value, error

    epsabs = settings.quad_epsabs if epsabs is None else epsabs
    epsrel = settings.quad_epsrel if epsrel is None else epsrel
    limit = settings.quad_limit if limit is None else limit

    if split is not None and a < split < b:
        pieces = [(a, split), (split, b)]
    else:
        pieces = [(a, b)]

    total = 0.0
    error = 0.0
    for lo, hi in pieces:
        result = integrate.quad(
            func, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1
        )
        value, abserr = result[0], result[1]
        if len(result) > 3:
            logger.debug(f"quad on [{lo}, {hi}] flagged: {str(result[3]).splitlines()[0]}")
        total += value
        error += abserr

    if not math.isfinite(total):
        raise AccuracyError(f"quadrature over [{a}, {b}] returned {total}", estimate=total)
    return total, error


def adaptive_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    **kwargs: float | int | None,
) -> float:
    """Value-only form of :func:`quad_with_error`."""
    value, _ = quad_with_error(func, a, b, **kwargs)
    return value
