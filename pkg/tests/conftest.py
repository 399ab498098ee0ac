import numpy as np
import pytest

from nlhirota.phase import geometry
from nlhirota.scattering import Profile, ScatteringData, reflection_coefficients

GRID = np.linspace(-8.0, 8.0, 2001)


def synthetic_r1(lam):
    return 0.6 * np.exp(-(lam - 0.2) ** 2) * np.exp(0.5j * lam)


def synthetic_r2(lam):
    return 0.5 * np.exp(0.8j) * np.exp(-lam ** 2)


def _smoothstep(u):
    # C-infinity transition from 0 (u <= 0) to 1 (u >= 1)
    u = np.clip(u, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
        b = np.where(u < 1, np.exp(-1.0 / np.where(u < 1, 1.0 - u, 1.0)), 0.0)
    return a / (a + b)


def plateau(lam):
    """Exactly 1 on [-0.7, 0.7], exactly 0 outside [-1.5, 1.5]."""
    return _smoothstep((1.5 - np.abs(lam)) / 0.8)


def plateau_data(c):
    return ScatteringData.from_functions(lambda l: c * plateau(l), lambda l: plateau(l) + 0j, GRID)


def phase_data(phase_max):
    """1 - r1 r2 = exp(i phase_max * plateau): pure argument excursion."""
    w = lambda l: np.exp(1j * phase_max * plateau(l))
    return ScatteringData.from_functions(lambda l: 1 - w(l), lambda l: np.ones_like(l) + 0j, GRID)


@pytest.fixture(scope="session")
def gaussian_profile():
    return Profile("gaussian", 0.5, 1.0)


@pytest.fixture(scope="session")
def gaussian_data(gaussian_profile):
    return reflection_coefficients(gaussian_profile, GRID)


@pytest.fixture(scope="session")
def synthetic_data():
    """Smooth reflection data with complex vartheta (nonzero imaginary part)."""
    return ScatteringData.from_functions(synthetic_r1, synthetic_r2, GRID, 0.0, 1.0)


@pytest.fixture(scope="session")
def ray_geometry():
    return geometry(0.0, 1.0, -3.0)
