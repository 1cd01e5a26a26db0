import math

import pytest

from sae_oscillator.model import PhysicalParams
from sae_oscillator.spectrum import SpectralProblem


def problem_for(P, tau=0.0, l=0, m=0.5, g=1.0):
    """Problem with index P; the defaults give omega = 1."""
    return SpectralProblem.from_params(PhysicalParams.from_index(P, l=l, m=m, g=g), tau)


@pytest.fixture
def make_problem():
    return problem_for


@pytest.fixture
def p04():
    return problem_for(0.4)


@pytest.fixture
def p025_minus1():
    return problem_for(0.25, -1.0)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


INF = math.inf
