"""CSV return-series source.

Contract: a header row, an optional leading ``date`` column, then one numeric column
per series. Rows with a missing or non-numeric cell are rejected with their line number.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path

import numpy as np
import pandas as pd

from dtmrisk.estimation.mle import ReturnSeries
from dtmrisk.exceptions import DataFormatError
from dtmrisk.ingestion.base import ReturnSource

logger = logging.getLogger("dtmrisk.ingestion.csv")

_LINE_PATTERN = re.compile(r"line (\d+)")


def _row_line(row_index: int) -> int:
    # header is line 1
    return row_index + 2


class CsvReturnSource(ReturnSource):
    """Reads aligned return columns from a CSV file."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)

    @property
    def source_name(self) -> str:
        return "csv"

    def _read(self) -> pd.DataFrame:
        try:
            return pd.read_csv(
                self.path, dtype=str, keep_default_na=False, skip_blank_lines=False
            )
        except FileNotFoundError:
            raise DataFormatError(f"{self.path}: no such file") from None
        except pd.errors.EmptyDataError:
            raise DataFormatError(f"{self.path}: file is empty", line=1) from None
        except pd.errors.ParserError as exc:
            match = _LINE_PATTERN.search(str(exc))
            line = int(match.group(1)) if match else None
            raise DataFormatError(f"{self.path}: ragged row", line=line) from exc

    def load(self) -> list[ReturnSeries]:
        frame = self._read()
        columns = [str(c).strip() for c in frame.columns]
        frame.columns = columns

        dates = None
        if columns and columns[0].lower() == "date":
            dates = frame[columns[0]].tolist()
            columns = columns[1:]
        if not columns:
            raise DataFormatError(f"{self.path}: no return columns in header", line=1)

        empty = frame.isna() | (frame.apply(lambda col: col.str.strip()) == "")
        bad_rows = np.flatnonzero(empty.to_numpy().any(axis=1))
        if bad_rows.size:
            raise DataFormatError(
                f"{self.path}: empty cell or missing field", line=_row_line(int(bad_rows[0]))
            )

        series = []
        for name in columns:
            numeric = pd.to_numeric(frame[name].str.strip(), errors="coerce")
            invalid = np.flatnonzero(~np.isfinite(numeric.to_numpy(dtype=float)))
            if invalid.size:
                row = int(invalid[0])
                raise DataFormatError(
                    f"{self.path}: column '{name}' value {frame[name].iloc[row]!r} is not a "
                    f"finite number",
                    line=_row_line(row),
                )
            if numeric.size < 2:
                raise DataFormatError(f"{self.path}: need at least 2 rows of returns")
            values = numeric.to_numpy(dtype=float)
            series.append(ReturnSeries(name=name, values=values, dates=dates))

        logger.info(f"Loaded {len(series)} series x {len(frame)} rows from {self.path}")
        return series
