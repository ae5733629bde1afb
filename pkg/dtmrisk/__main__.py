"""Allow ``python -m dtmrisk``."""

from dtmrisk.cli.main import run

run()
