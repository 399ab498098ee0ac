import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from nlhirota.errors import DomainError, SectorError
from nlhirota.phase import (
    geometry,
    leg_decay_exponent,
    phase_f,
    phase_f_prime,
    phase_theta,
    sign_re_if,
    stationary_points,
    steepest_contours,
)


def test_stationary_points_examples():
    assert stationary_points(0, 1, -3) == pytest.approx((-0.5, 0.5), abs=1e-15)
    lam0, lam1 = stationary_points(1, 1, 0)
    assert lam0 == pytest.approx(-1 / 3, abs=1e-15) and lam1 == 0.0


def test_stationary_points_errors():
    with pytest.raises(SectorError):
        stationary_points(0, 1, 1.0)
    with pytest.raises(DomainError):
        stationary_points(1, 0, -1.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(-3, 3), st.floats(0.1, 3), st.floats(-10, 3))
def test_stationary_points_are_roots(alpha, beta, xi):
    assume(alpha * alpha - 3 * beta * xi > 1e-3)
    g = geometry(alpha, beta, xi)
    assert g.lambda0 < g.lambda1
    scale = 1 + abs(xi) + abs(alpha) * abs(g.lambda0) + beta * g.lambda0 ** 2
    assert abs(phase_f_prime(g.lambda0, xi, alpha, beta)) <= 1e-12 * scale
    assert abs(phase_f_prime(g.lambda1, xi, alpha, beta)) <= 1e-12 * (scale + beta * g.lambda1 ** 2)
    # a0 = -sqrt(D) < 0 < a1 = sqrt(D)
    assert g.a0 == pytest.approx(-math.sqrt(g.discriminant)) and g.a1 == pytest.approx(math.sqrt(g.discriminant))


def test_phase_theta_examples():
    assert phase_theta(2.0, 0.0, 1.5, 0.3, 0.7) == pytest.approx(3.0)
    assert phase_f(1.0, -6.0, 1.0, 1.0) == 0.0
    th = phase_theta(0.3, 2.0, np.array([0.1, -2.0]), 0.5, 1.0)
    assert np.isrealobj(th)


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.floats(0.1, 5), st.floats(-3, 3), st.floats(-2, 2), st.floats(0.1, 2))
def test_theta_equals_t_times_f(x, t, lam, alpha, beta):
    assert phase_theta(x, t, lam, alpha, beta) == pytest.approx(t * phase_f(lam, x / t, alpha, beta), rel=1e-12, abs=1e-12)


def test_sign_chart():
    g = geometry(0, 1, -3)
    assert sign_re_if(0.3, g) == 0
    assert sign_re_if(0.05j, g) == 1
    assert sign_re_if(-0.05j, g) == -1


@settings(max_examples=60, deadline=None)
@given(st.floats(-3, 3), st.floats(0.01, 3))
def test_sign_chart_conjugation(re, im):
    g = geometry(0.4, 1.2, -2.0)
    s = sign_re_if(complex(re, im), g)
    assert sign_re_if(complex(re, -im), g) == -s


def test_contour_parametrization():
    g = geometry(0, 1, -3)
    L, Lstar = steepest_contours(g, t=10.0)
    leg1 = L[0]
    assert leg1.point(0.0) == pytest.approx(g.lambda1)
    assert leg1.point(math.sqrt(2)) == pytest.approx(1j * g.lambda1, abs=1e-15)
    assert np.allclose(Lstar[0].nodes, np.conj(L[0].nodes))
    assert np.allclose(Lstar[1].nodes, np.conj(L[1].nodes))
    # truncation: the leg's exponential is below 1e-16 at rho_min
    rho = leg1.rho_min
    assert leg_decay_exponent(g, rho, 10.0) <= math.log(1e-16) + 1e-6


def test_leg_decay_exponent_matches_phase():
    g = geometry(0.3, 1.1, -2.5)
    t = 3.0
    for rho in (0.2, 0.7, 1.3):
        lam = g.lambda1 + g.lambda1 * rho * np.exp(0.75j * np.pi)
        direct = np.log(abs(np.exp(-2j * t * (phase_f(lam, g.xi, g.alpha, g.beta) - g.f(g.lambda1)))))
        assert leg_decay_exponent(g, rho, t) == pytest.approx(direct, rel=1e-10)


def test_decay_negative_on_interior_of_leg():
    g = geometry(0, 1, -3)
    rho = np.linspace(1e-3, math.sqrt(2) - 1e-3, 200)
    assert np.all(leg_decay_exponent(g, rho) < 0)
