"""Batch evaluation: window sweeps and oracle verification."""
