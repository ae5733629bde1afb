"""Density generator families of univariate elliptical distributions."""
