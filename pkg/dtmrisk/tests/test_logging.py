"""Tests for the structured log formatter."""

import logging
import sys

from dtmrisk.logging_config import StructuredFormatter


class TestStructuredFormatter:
    def test_single_line_record(self):
        record = logging.LogRecord(
            "dtmrisk.measures", logging.WARNING, __file__, 1, "order %d is close", (4,), None
        )
        line = StructuredFormatter().format(record)
        assert line.startswith("[WARNING]")
        assert "dtmrisk.measures order 4 is close" in line
        assert "\n" not in line

    def test_exception_appended(self):
        try:
            raise ValueError("bad window")
        except ValueError:
            record = logging.LogRecord(
                "dtmrisk.cli", logging.ERROR, __file__, 1, "sweep failed", (), sys.exc_info()
            )
        line = StructuredFormatter().format(record)
        assert line.startswith("[ERROR  ]")
        assert "dtmrisk.cli sweep failed" in line
        assert line.rstrip().endswith("ValueError: bad window")
