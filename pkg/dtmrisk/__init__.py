"""dtmrisk: doubly truncated moment risk measures for elliptical distributions."""

__version__ = "0.1.0"
