"""Parameter estimation for multivariate return data."""
