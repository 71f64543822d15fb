import math

import numpy as np
import pytest

from charlab.solutions import make_simple_wave, profile_from_f, sine_profile

TWO_PI = 2 * math.pi


def observed_order(spacings, errors):
    """Least-squares slope of log(error) against log(spacing)."""
    return float(np.polyfit(np.log(spacings), np.log(errors), 1)[0])


def coarse_nodes(grid, start, stop, step):
    """Nodes of a coarse grid; they stay nodes under nested refinement."""
    return np.asarray(grid)[start:stop:step]


@pytest.fixture(scope="session")
def sine_wave():
    """+simple wave with H = 1 + 0.1 sin(y), alpha = 0."""
    return make_simple_wave(1, 0.0, sine_profile(1.0, 0.1))


@pytest.fixture(scope="session")
def tanh_profile():
    """H = 1 + 0.1 tanh(y), built from f(y) = 10 cosh(y)^2."""
    return profile_from_f(lambda y: 10.0 * np.cosh(y) ** 2, 0.0, 1.0, (-6.0, 6.0))


@pytest.fixture(scope="session")
def tanh_wave(tanh_profile):
    return make_simple_wave(1, 0.0, tanh_profile)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
