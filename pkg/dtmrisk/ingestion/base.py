"""Base interface for return-series sources."""

from __future__ import annotations

from abc import ABC, abstractmethod

from dtmrisk.estimation.mle import ReturnSeries


class ReturnSource(ABC):
    """Abstract base class for anything that yields aligned return series."""

    @property
    @abstractmethod
    def source_name(self) -> str:
        """Identifier for this source type."""
        ...

    @abstractmethod
    def load(self) -> list[ReturnSeries]:
        """Load every series, all of the same length."""
        ...
