"""Return-series sources."""
