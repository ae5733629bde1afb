"""Window schedules and a thread-pool runner evaluating one risk report per window."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from dtmrisk.config import settings
from dtmrisk.distribution.elliptical import EllipticalDistribution
from dtmrisk.exceptions import DomainError, DTMError
from dtmrisk.measures.engine import risk_report
from dtmrisk.models.report import RiskReport

logger = logging.getLogger("dtmrisk.sweep")

SCHEDULE_LEVELS = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30)


@dataclass
class SweepRow:
    """One window of a sweep; exactly one of ``report`` and ``error`` is set."""

    p: float
    q: float
    report: RiskReport | None = None
    error: str | None = None


def symmetric_schedule(levels: Sequence[float] = SCHEDULE_LEVELS) -> list[tuple[float, float]]:
    """(p, 1 - p) windows."""
    return [(p, round(1.0 - p, 12)) for p in levels]


def fixed_width_schedule(
    width: float = 0.65, levels: Sequence[float] = SCHEDULE_LEVELS
) -> list[tuple[float, float]]:
    """(p, p + width) windows, all of probability mass ``width``."""
    windows = [(p, round(p + width, 12)) for p in levels]
    for p, q in windows:
        if not (0.0 <= p < q <= 1.0):
            raise DomainError(f"fixed-width window ({p}, {q}) leaves [0, 1]")
    return windows


def parse_windows(text: str) -> list[tuple[float, float]]:
    """Parse ``"p:q,p:q,..."``."""
    windows = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            p_text, q_text = chunk.split(":")
            p, q = float(p_text), float(q_text)
        except ValueError:
            raise DomainError(f"window '{chunk}' is not of the form p:q") from None
        if not (0.0 <= p < q <= 1.0):
            raise DomainError(f"window '{chunk}' requires 0 <= p < q <= 1")
        windows.append((p, q))
    if not windows:
        raise DomainError("no windows given")
    return windows


class SweepRunner:
    """Evaluates risk reports over many windows on a thread pool, preserving order."""

    def __init__(self, max_workers: int | None = None) -> None:
        self.max_workers = max_workers or settings.sweep_workers

    def _evaluate(
        self,
        dist: EllipticalDistribution,
        window: tuple[float, float],
        measures: Sequence[str],
    ) -> SweepRow:
        p, q = window
        try:
            report = risk_report(dist, dist.window(p, q), measures=measures)
        except DTMError as exc:
            logger.warning(f"Sweep window ({p}, {q}) failed: {exc}")
            return SweepRow(p=p, q=q, error=str(exc))
        return SweepRow(p=p, q=q, report=report)

    def run(
        self,
        dist: EllipticalDistribution,
        windows: Iterable[tuple[float, float]],
        measures: Sequence[str] = ("dte", "dtv", "dts", "dtk"),
    ) -> list[SweepRow]:
        windows = list(windows)
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            rows = list(pool.map(lambda w: self._evaluate(dist, w, measures), windows))

        failed = sum(1 for row in rows if row.error)
        logger.info(
            f"Sweep over {len(rows)} windows for {dist.family.describe()}: {failed} failed"
        )
        return rows
