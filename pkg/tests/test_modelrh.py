import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlhirota import asymptotics as A
from nlhirota import modelrh as R
from nlhirota.errors import DomainError


def problem_for(vt, which, r1=0.5):
    r2 = (1 - cmath.exp(-2 * math.pi * vt)) / r1
    return R.model_problem(r1, r2, which, vt)


VARTHETAS = [0.1, 0.2, -1j / 6, 0.15 + 0.1j]


def test_degenerate_diagonal_reduces_to_gaussian_factors():
    p = R.model_problem(0.7, 0.0, 0)
    assert p.vartheta == 0 and p.psi == 0
    for z in (1 + 1j, -0.5 + 2j, 0.3 - 1.2j):
        M = R.model_solution(p, z)
        assert abs(M[0, 0] - cmath.exp(0.25j * z * z)) < 1e-14 * abs(M[0, 0])
        assert abs(M[1, 1] - cmath.exp(-0.25j * z * z)) < 1e-14 * abs(M[1, 1])
        assert M[0, 1] == pytest.approx(0, abs=1e-14)
    assert R.jump_product_check(p) < 1e-14
    assert R.ode_residual(p, 1 + 1j) < 1e-8


def test_ode_residual_generic():
    for which in (0, 1):
        assert R.ode_residual(problem_for(0.15, which), 1 + 1j) <= 1e-8


@pytest.mark.parametrize("which", [0, 1])
@pytest.mark.parametrize("vt", VARTHETAS)
def test_ode_residual_both_half_planes(which, vt):
    p = problem_for(vt, which)
    for z in (1 + 1j, -2 + 0.5j, 0.7 - 1.1j, -1.5 - 2j):
        assert R.ode_residual(p, z) <= 1e-8


@pytest.mark.parametrize("which", [0, 1])
def test_determinant_unity(which):
    p = problem_for(0.15 + 0.1j, which)
    rng = np.random.default_rng(11)
    for _ in range(20):
        z = complex(rng.uniform(-3, 3), rng.choice([-1, 1]) * rng.uniform(0.1, 3))
        assert abs(np.linalg.det(R.model_solution(p, z)) - 1) <= 1e-8


@pytest.mark.parametrize("which", [0, 1])
@pytest.mark.parametrize("vt", [0.0, 0.1, 0.2, -1j / 6])
def test_jump_product(which, vt):
    p = problem_for(vt, which) if vt != 0 else R.model_problem(0.5, 0.0, which)
    assert R.jump_product_check(p) <= 1e-9


@pytest.mark.parametrize("which", [0, 1])
@pytest.mark.parametrize("vt", VARTHETAS)
def test_constant_jump_on_real_axis(which, vt):
    p = problem_for(vt, which)
    assert R.constant_jump_residual(p) <= 1e-7
    # and it matches the product at the origin
    assert np.max(np.abs(R.jump_product(p) - R.jump_matrix(p))) <= 1e-9


def test_pcf_at_zero_against_mpmath():
    for nu in (0.3j, -0.2 + 0.1j, 1.5):
        d0, d1 = R.pcf_at_zero(nu)
        assert abs(d0 - complex(mpmath.pcfd(nu, 0))) < 1e-13
        assert abs(d1 - complex(mpmath.diff(lambda w: mpmath.pcfd(nu, w), 0))) < 1e-12


@pytest.mark.parametrize("which", [0, 1])
@pytest.mark.parametrize("vt", VARTHETAS)
def test_quoted_coefficients_match_moments(which, vt):
    p = problem_for(vt, which)
    psi, phi = R.psi_phi(p)
    r1, r2 = p.r1_at, p.r2_at
    assert abs(psi - 1j * A.model_m1(r1, r2, vt, which)) <= 1e-12 * abs(psi)
    assert abs(phi + 1j * A.model_m1_21(r1, r2, vt, which)) <= 1e-12 * abs(phi)


def test_quoted_vs_solution_relation():
    for vt in VARTHETAS:
        p0 = problem_for(vt, 0)
        d = 1 - p0.r1_at * p0.r2_at
        q_psi, q_phi = R.psi_phi(p0)
        assert abs(q_psi - d * p0.psi) < 1e-12 * abs(q_psi)
        assert abs(q_phi + p0.phi / d ** 2) < 1e-12 * abs(q_phi)
        p1 = problem_for(vt, 1)
        assert np.allclose(R.psi_phi(p1), R.solution_psi_phi(p1), rtol=1e-13, atol=0)


def test_psi_phi_product_regression():
    vt = 0.2
    p = problem_for(vt, 0)
    assert p.psi * p.phi == pytest.approx(vt, rel=1e-13)
    # independent evaluation of the quoted pair with mpmath's Gamma
    r1, r2 = p.r1_at, p.r2_at
    ip = 1j * math.pi
    ref_psi = (math.sqrt(2 * math.pi) * complex(mpmath.exp(ip * (1j * vt + 0.5)))
               * cmath.exp(-0.75j * math.pi + math.pi * vt / 2) / (r1 * complex(mpmath.gamma(1j * vt))))
    ref_phi = (-math.sqrt(2 * math.pi) * complex(mpmath.exp(ip * (-1j * vt + 0.5)))
               * cmath.exp(-0.25j * math.pi + math.pi * vt / 2) / (r2 * complex(mpmath.gamma(-1j * vt))))
    q_psi, q_phi = R.psi_phi(p)
    assert abs(q_psi * q_phi - ref_psi * ref_phi) < 1e-12
    assert q_psi * q_phi == pytest.approx(-vt / (1 - r1 * r2), rel=1e-12)


def test_psi_phi_degenerate():
    p = R.model_problem(0.4, 0.0, 0)
    assert R.psi_phi(p) == (0, 0)


def test_model_problem_validation():
    with pytest.raises(DomainError):
        R.model_problem(0.5, 0.5, 0, vartheta=0.3)
    with pytest.raises(DomainError):
        R.model_problem(1.0, 1.0, 0)


@pytest.mark.parametrize("which", [0, 1])
@pytest.mark.parametrize("vt", [0.1, -1j / 6, 0.15 + 0.1j])
def test_ray_jumps_after_sector_transforms(which, vt):
    p = problem_for(vt, which)
    assert R.ray_jump_residual(p) <= 1e-7


@pytest.mark.parametrize("which", [0, 1])
def test_moment_from_large_z(which):
    """Psi and Phi from the 1/z term of the normalized solution (Richardson in R)."""
    p = problem_for(0.15 + 0.05j, which)

    def moment(R_):
        z = 1j * R_
        M = R.infinity_solution(p, z)
        return np.array([1j * z * M[0, 1], -1j * z * M[1, 0]])

    target = np.array([p.psi, p.phi])

    def err(R_):
        est = 2 * moment(2 * R_) - moment(R_)
        return np.max(np.abs(est - target) / np.abs(target))

    e7, e14 = err(7.0), err(14.0)
    assert e14 < 5e-3
    assert e14 < 0.6 * e7


@settings(max_examples=15, deadline=None)
@given(st.floats(-0.3, 0.3), st.floats(-0.3, 0.3), st.sampled_from([0, 1]))
def test_jump_product_property(re, im, which):
    vt = complex(re, im)
    if abs(vt) < 1e-3:
        return
    p = problem_for(vt, which, r1=0.8)
    assert R.jump_product_check(p) <= 1e-9
    assert abs(p.psi * p.phi - vt) <= 1e-12 * abs(vt)
