"""Shared test fixtures for dtmrisk tests."""

import numpy as np
import pytest

from dtmrisk.distribution.elliptical import EllipticalDistribution
from dtmrisk.generators.families import (
    LaplaceFamily,
    LogisticFamily,
    NormalFamily,
    PearsonVIIFamily,
    StudentTFamily,
)

# Parameters chosen so every family supports moments up to order 4.
FAMILIES = {
    "normal": NormalFamily(),
    "student-t": StudentTFamily(m=8.0),
    "logistic": LogisticFamily(),
    "laplace": LaplaceFamily(),
    "pearson-vii": PearsonVIIFamily(t=4.5),
}

CLOSED_CDF_FAMILIES = ["normal", "student-t", "laplace", "pearson-vii"]


@pytest.fixture(params=list(FAMILIES), ids=list(FAMILIES))
def family(request):
    return FAMILIES[request.param]


@pytest.fixture(params=CLOSED_CDF_FAMILIES, ids=CLOSED_CDF_FAMILIES)
def closed_family(request):
    return FAMILIES[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def standard_normal():
    return EllipticalDistribution(0.0, 1.0, NormalFamily())
