import math

import numpy as np
import pytest

from nlhirota import rhoracle as O
from nlhirota.errors import CollocationError, DomainError
from nlhirota.phase import geometry, phase_theta
from nlhirota.scattering import Profile, ScatteringData, reflection_coefficients

from conftest import GRID


def segment_system(a, b, panels, order):
    br = np.linspace(a, b, panels + 1)
    ends = np.stack([br[:-1], br[1:]], axis=1).astype(complex)
    nodes, weights = O._panels_to_nodes(ends, order)
    jumps = np.broadcast_to(np.eye(2, dtype=complex), (nodes.size, 2, 2)).copy()
    return O.RHSystem(nodes, weights, jumps, ends, order)


def test_build_jump_shape_and_determinant(gaussian_data):
    J = O.build_jump(gaussian_data, 0.3, 1.0, 0.7)
    assert J.shape == (2, 2)
    lam = np.linspace(-3, 3, 41)
    Js = O.build_jump(gaussian_data, -1.0, 2.0, lam)
    assert Js.shape == (41, 2, 2)
    assert np.max(np.abs(np.linalg.det(Js) - 1)) < 1e-14


def test_build_jump_entries(synthetic_data):
    lam, x = 0.4, 0.9
    J = O.build_jump(synthetic_data, x, 0.0, lam)
    r1, r2 = synthetic_data.r1_at(lam), synthetic_data.r2_at(lam)
    e = np.exp(2j * phase_theta(x, 0.0, lam, 0.0, 1.0))
    assert np.allclose(J, [[1 - r1 * r2, -r2 / e], [r1 * e, 1]], atol=1e-15)
    # outside the sampled grid the jump is the identity
    assert np.array_equal(O.build_jump(synthetic_data, x, 0.0, 20.0), np.eye(2))


def test_cauchy_matrix_against_closed_form():
    z0 = 0.3 + 0.7j
    errs = []
    for panels in (4, 8):
        sysm = segment_system(-1.0, 1.0, panels, 16)
        K = O.cauchy_minus_matrix(sysm)
        s = sysm.nodes
        approx = K @ (1.0 / (s - z0))
        z = s - 1e-300j
        exact = (np.log((1 - z0) / (-1 - z0)) - np.log((1 - z) / (-1 - z))) / (z0 - z) / (2j * math.pi)
        errs.append(np.max(np.abs(approx - exact)))
    assert errs[1] < 1e-8
    assert errs[1] < errs[0]


def test_identity_jumps_give_zero_moment():
    sysm = O.solve_rh(segment_system(-2.0, 2.0, 6, 12))
    assert np.all(sysm.M1 == 0)
    assert O.reconstruct_q(sysm) == 0
    assert np.allclose(sysm.density, np.eye(2))


def test_nilpotent_jump_matches_fourier_transform():
    """With r1 = 0 the problem is triangular and q(x, 0) is a Fourier integral of r2."""
    a = 0.4
    data = ScatteringData.from_functions(lambda l: 0 * l, lambda l: a * np.exp(-l * l), GRID)
    for x in (-1.0, 0.0, 0.6, 2.0):
        q = O.oracle_q(data, x, 0.0, mode="real")
        exact = a / math.sqrt(math.pi) * math.exp(-x * x)
        assert abs(q - exact) < 1e-10


def test_lower_nilpotent_jump_gives_zero():
    data = ScatteringData.from_functions(lambda l: 0.4 * np.exp(-l * l), lambda l: 0 * l, GRID)
    assert abs(O.oracle_q(data, 0.5, 0.0, mode="real")) < 1e-13


@pytest.fixture(scope="module")
def small_gaussian():
    prof = Profile("gaussian", 0.3, 1.0)
    return prof, reflection_coefficients(prof, GRID)


def test_round_trip_at_time_zero(small_gaussian):
    prof, data = small_gaussian
    xs = np.linspace(-5, 5, 11)
    q = np.array([O.oracle_q(data, x, 0.0, mode="real") for x in xs])
    assert np.max(np.abs(q - prof.q0(xs))) <= 1e-4
    # the profile is even and real, so the reconstruction is too
    assert np.max(np.abs(q - q[::-1])) < 1e-8
    assert np.max(np.abs(q.imag)) < 1e-8


def test_node_refinement(small_gaussian):
    _, data = small_gaussian
    coarse = O.oracle_q(data, 0.8, 0.0, mode="real", order=12, hmax=1.0)
    fine = O.oracle_q(data, 0.8, 0.0, mode="real", order=16, hmax=0.5)
    assert abs(coarse - fine) <= 1e-6


def test_contours_agree_at_small_time(gaussian_data):
    x, t = -0.75, 0.25
    real = O.oracle_q(gaussian_data, x, t, mode="real")
    full = O.oracle_q(gaussian_data, x, t, mode="full_lens")
    part = O.oracle_q(gaussian_data, x, t, mode="partial_lens")
    assert abs(full - real) < 1e-8
    assert abs(part - real) < 1e-8


def test_lens_contours_agree(gaussian_data):
    x, t = -30.0, 10.0
    full = O.oracle_q(gaussian_data, x, t, mode="full_lens")
    part = O.oracle_q(gaussian_data, x, t, mode="partial_lens")
    assert abs(full - part) < 1e-8


def test_deformed_jumps_unimodular(gaussian_data, ray_geometry):
    sysm = O.build_deformed_jumps(gaussian_data, ray_geometry, -30.0, 10.0)
    assert sysm.det_defect() < 1e-10
    assert set(sysm.meta["legs"]) == {"UR", "LR", "UL", "LL", "A", "B", "C", "D"}


def test_zero_data_deformed_jumps_are_identity(ray_geometry):
    data = reflection_coefficients(Profile("gaussian", 0.0, 1.0), np.linspace(-4, 4, 101))
    sysm = O.build_deformed_jumps(data, ray_geometry, -30.0, 10.0)
    assert np.max(np.abs(sysm.jumps - np.eye(2))) < 1e-15
    assert O.oracle_q(data, -30.0, 10.0) == 0


def test_guard_rejects_large_jumps():
    data = ScatteringData.from_functions(lambda l: 20 * np.exp(-l * l), lambda l: 0 * l, GRID)
    with pytest.raises(CollocationError, match="identity"):
        O.oracle_q(data, 0.0, 0.0, mode="real")


def test_residual_guard(small_gaussian):
    _, data = small_gaussian
    with pytest.raises(CollocationError, match="residual"):
        O.oracle_q(data, 0.0, 0.0, mode="real", residual_tol=0.0)


def test_deformation_needs_profile_and_positive_time(synthetic_data, gaussian_data, ray_geometry):
    with pytest.raises(DomainError):
        O.build_deformed_jumps(synthetic_data, ray_geometry, -3.0, 1.0)
    with pytest.raises(DomainError):
        O.build_partial_lens(gaussian_data, ray_geometry, 0.0, 0.0)


def test_node_limit():
    sysm = segment_system(-1.0, 1.0, O.MAX_NODES // 8 + 1, 8)
    with pytest.raises(CollocationError):
        O.cauchy_minus_matrix(sysm)


def test_auto_mode_selects_real_line_at_time_zero(small_gaussian):
    _, data = small_gaussian
    assert O.oracle_q(data, 0.2, 0.0) == O.oracle_q(data, 0.2, 0.0, mode="real")
