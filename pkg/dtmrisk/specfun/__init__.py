"""Special-function kernel: Gamma, Beta, normal pdf/cdf, Hurwitz-Lerch zeta."""
