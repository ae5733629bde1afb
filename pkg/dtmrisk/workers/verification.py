"""Compare closed-form measures against the quadrature oracle."""

from __future__ import annotations

import logging
from collections.abc import Sequence

from dtmrisk.config import settings
from dtmrisk.distribution.elliptical import EllipticalDistribution, TruncationWindow
from dtmrisk.measures.engine import MEASURE_ORDERS, risk_report
from dtmrisk.models.report import OracleComparison, OracleSummary, RiskReport
from dtmrisk.oracle.quadrature import oracle_report, relative_error

logger = logging.getLogger("dtmrisk.verification")


def _oracle_value(oracle: RiskReport, measure: str, order: int | None) -> float:
    if order:
        return oracle.dtm[order]
    return getattr(oracle, measure)


def _scale(dist: EllipticalDistribution, measure: str, order: int | None) -> float:
    if order:
        return dist.sigma**order
    if measure == "dte":
        return dist.sigma
    if measure == "dtv":
        return dist.sigma**2
    return 1.0


def compare_with_oracle(
    dist: EllipticalDistribution,
    window: TruncationWindow,
    measures: Sequence[str] = ("dte", "dtv", "dts", "dtk"),
    dtm_orders: Sequence[int] = (),
    tolerance: float | None = None,
) -> OracleSummary:
    """Closed form vs oracle for each requested measure.

    An oracle that misses its own accuracy bar still contributes its best estimate,
    flagged in the comparison's warnings.
    """
    tolerance = settings.oracle_tolerance if tolerance is None else tolerance
    closed: RiskReport = risk_report(dist, window, measures=measures, dtm_orders=dtm_orders)

    targets: list[tuple[str, int | None, float]] = [
        (m, None, getattr(closed, m)) for m in measures if m in MEASURE_ORDERS
    ]
    targets += [(f"dtm{n}", n, closed.dtm[n]) for n in sorted(set(dtm_orders))]

    oracle = oracle_report(
        dist,
        window,
        measures=[m for m in measures if m in MEASURE_ORDERS],
        dtm_orders=dtm_orders,
        strict=False,
    )
    oracle_warnings = [f"oracle: {message}" for message in oracle.warnings]

    comparisons = []
    for name, order, closed_value in targets:
        oracle_value = _oracle_value(oracle, name, order)
        comparisons.append(
            OracleComparison(
                measure=name,
                closed_form=closed_value,
                oracle=oracle_value,
                relative_error=relative_error(
                    closed_value, oracle_value, _scale(dist, name, order)
                ),
                warnings=closed.warnings + oracle_warnings,
            )
        )

    worst = max((c.relative_error for c in comparisons), default=0.0)
    logger.info(
        f"Oracle check for {dist.family.describe()} on ({window.p}, {window.q}): "
        f"max relative error {worst:.3e}"
    )
    return OracleSummary(
        family=dist.family.describe(),
        p=window.p,
        q=window.q,
        tolerance=tolerance,
        comparisons=comparisons,
        max_relative_error=worst,
        passed=worst <= tolerance,
    )
