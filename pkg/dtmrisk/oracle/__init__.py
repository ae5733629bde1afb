"""Independent quadrature oracle for truncated moments."""
