import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlhirota.errors import DomainError, OnCutError, PoleError
from nlhirota.specfun import (
    branch_log,
    branch_power,
    cgamma,
    log_cgamma,
    pcf_D,
    pcf_D_prime,
    reciprocal_cgamma,
)

finite = dict(allow_nan=False, allow_infinity=False)


def test_gamma_trivial_values():
    assert abs(cgamma(1) - 1) < 1e-15
    assert abs(cgamma(3) - 2) < 1e-14


def test_gamma_imaginary_modulus_identity():
    y = 0.5
    assert abs(abs(cgamma(1j * y)) ** 2 - math.pi / (y * math.sinh(math.pi * y))) < 1e-13


def test_gamma_poles():
    for n in (0, -1, -5):
        with pytest.raises(PoleError):
            cgamma(n)
        assert reciprocal_cgamma(n) == 0


@pytest.mark.parametrize("z", [0.3 + 0.2j, -2.7 + 1.1j, 5 - 4j, 12.5 + 9j, -0.5j, 15 + 0j, 0.01 + 19j])
def test_gamma_against_mpmath(z):
    ref = complex(mpmath.gamma(z))
    assert abs(cgamma(z) - ref) <= 1e-12 * abs(ref)


def test_log_gamma_continuous_branch():
    z = 30 + 40j
    ref = complex(mpmath.loggamma(z))
    assert abs(log_cgamma(z) - ref) < 1e-11


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5, **finite), st.floats(-5, 5, **finite))
def test_gamma_recurrence(x, y):
    z = complex(x, y)
    if abs(y) < 1e-6 and abs(x - round(x)) < 1e-6 and round(x) <= 1:
        return
    g1 = cgamma(z + 1)
    assert abs(g1 - z * cgamma(z)) <= 1e-11 * abs(g1)


@settings(max_examples=60, deadline=None)
@given(st.floats(-4, 4, **finite), st.floats(-3, 3, **finite))
def test_gamma_reflection(x, y):
    z = complex(x, y)
    if abs(z - round(x)) < 1e-3:
        return
    val = cgamma(z) * cgamma(1 - z) * cmath.sin(math.pi * z) / math.pi
    assert abs(val - 1) < 1e-10


def test_pcf_trivial_orders():
    assert abs(pcf_D(0, 2) - math.exp(-1)) < 1e-14
    assert abs(pcf_D(1, 1) - math.exp(-0.25)) < 1e-14


def test_pcf_recurrence():
    nu, z = 0.3j, 1.2 + 0.5j
    val = pcf_D(nu + 1, z) - z * pcf_D(nu, z) + nu * pcf_D(nu - 1, z)
    assert abs(val) < 1e-10


@pytest.mark.parametrize(
    "nu,z",
    [(0.1j, 0.7 + 0.2j), (-0.1j, 3.0 * cmath.exp(0.75j * math.pi)), (0.2 + 0.3j, 5 - 5j),
     (-1.5 + 0.5j, 8 + 1j), (0.5j, 15 * cmath.exp(-0.25j * math.pi)), (2.5, -3 + 0.1j),
     (-0.3 - 0.2j, 20 * cmath.exp(2.0j)), (1j, 25j)],
)
def test_pcf_against_mpmath(nu, z):
    mpmath.mp.dps = 30
    ref = complex(mpmath.pcfd(nu, z))
    dref = complex(mpmath.diff(lambda w: mpmath.pcfd(nu, w), z))
    mpmath.mp.dps = 15
    scale = max(abs(ref), 1e-300)
    assert abs(pcf_D(nu, z) - ref) <= 1e-10 * scale + 1e-300
    assert abs(pcf_D_prime(nu, z) - dref) <= 1e-9 * max(abs(dref), scale)


def _weber_residual(nu, z, h=1e-2):
    # 8th-order central second difference
    c = [-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560]
    vals = [pcf_D(nu, z + (k - 4) * h) for k in range(9)]
    d2 = sum(ck * v for ck, v in zip(c, vals)) / h ** 2
    y = vals[4]
    return abs(d2 + (nu + 0.5 - z * z / 4) * y) / max(abs(y), abs(d2), 1e-300)


def test_weber_ode_residual_sampled():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        nu = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        z = rng.uniform(0.2, 10) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        worst = max(worst, _weber_residual(nu, z))
    assert worst <= 1e-8


def test_pcf_domain_guard():
    with pytest.raises(DomainError):
        pcf_D(6, 1.0)
    with pytest.raises(DomainError):
        pcf_D(0.5, 31.0)


def test_branch_power_infinity_and_positive():
    assert abs(branch_power(1e6, -1, 1, 0.3j) - 1) < 1e-5
    v = branch_power(3.0, -1, 1, 0.7)
    assert abs(v.imag) < 1e-15 and v.real > 0


def test_branch_power_side_limits():
    up = branch_power(0.5 + 1e-8j, -1, 1, 1j)
    down = branch_power(0.5 - 1e-8j, -1, 1, 1j)
    # oracle: the log jumps by 2 pi i across the cut
    lp = cmath.log((0.5 - 1) / (0.5 + 1)).real
    assert abs(up / down - cmath.exp(1j * (2j * math.pi))) < 1e-7
    assert abs(branch_power(0.5, -1, 1, 1j, side="+") - cmath.exp(1j * (lp + 1j * math.pi))) < 1e-14


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(-1, 1, **finite), st.floats(-0.4, 0.4, **finite))
def test_branch_power_jump_property(u, pr, pi_):
    lam0, lam1 = -0.7, 1.3
    s = lam0 + u * (lam1 - lam0)
    p = complex(pr, pi_)
    ratio = branch_power(s, lam0, lam1, p, side="+") / branch_power(s, lam0, lam1, p, side="-")
    assert abs(ratio - cmath.exp(2j * math.pi * p)) <= 1e-9 * abs(ratio)


def test_branch_log_on_cut_requires_side():
    with pytest.raises(OnCutError):
        branch_log(0.0, -1, 1)
    with pytest.raises(OnCutError):
        branch_log(1.0, -1, 1, side="+")


@settings(max_examples=60, deadline=None)
@given(st.floats(-5, 5, **finite), st.floats(0.01, 5, **finite))
def test_branch_log_continuity_off_cut(x, y):
    # continuity across the real axis outside the cut, and a branch with Im in (-pi, pi]
    lam0, lam1 = -1.0, 1.0
    if abs(x) <= 1.0:
        return
    a = branch_log(complex(x, 1e-12), lam0, lam1)
    b = branch_log(complex(x, -1e-12), lam0, lam1)
    assert abs(a - b) < 1e-9
    assert -math.pi < branch_log(complex(x, y), lam0, lam1).imag <= math.pi
