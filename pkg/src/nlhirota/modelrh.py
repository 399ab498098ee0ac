"""
Parabolic-cylinder solution of the constant-jump model problem.

Find M analytic off the real line with

    M_+ = M_- J,   J = [[1 - r1 r2, -r2], [r1, 1]]   (r1, r2 frozen at a stationary point),

and the normalization

    lam0 type:  M ~ e^{ i z^2 sigma3 / 4} z^{-i vt sigma3},   z^{-i vt} cut on the positive axis,
    lam1 type:  M ~ e^{-i z^2 sigma3 / 4} z^{ i vt sigma3},   principal branch,

with 1 - r1 r2 = e^{-2 pi vt}. Writing s = +1 (lam0) or s = -1 (lam1), M solves

    dM/dz + s ([[-i z / 2, Psi], [Phi, i z / 2]]) M = 0,   Psi Phi = vt,

with Psi = i [M1]_12 and Phi = -i [M1]_21 in terms of M = (I + M1 / z + ...) G0.
The diagonal entries are multiples of D_{-/+ i vt}(k z); the off-diagonal
entries follow from the system. The constants k and the powers of k are
chosen per half-plane so the large-z normalization holds with the stated
branch (see ``_half_plane_constants``).

The closed-form coefficients of the solution are

    lam0: Psi = sqrt(2 pi) e^{3 pi vt / 2} e^{-i pi / 4} / (r1 Gamma(i vt)),
          Phi = sqrt(2 pi) e^{-5 pi vt / 2} e^{i pi / 4} / (r2 Gamma(-i vt)),
    lam1: Psi = sqrt(2 pi) e^{-pi vt / 2} e^{i pi / 4} / (r1 Gamma(-i vt)),
          Phi = sqrt(2 pi) e^{-pi vt / 2} e^{-i pi / 4} / (r2 Gamma(i vt)).

For the lam1 type these agree with the quoted closed forms (``psi_phi``).
For the lam0 type the quoted pair differs: Psi_quoted = (1 - r1 r2) Psi and
Phi_quoted = -Phi / (1 - r1 r2)^2. In the leading-order term for q only the
product delta0^2 [M1]_12 enters, and the scaling factor delta0 built with
the principal power of the positive base carries the compensating
e^{pi vt}, so the product is unaffected.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import pcf_D, pcf_D_prime, reciprocal_cgamma

__all__ = [
    "ModelProblem",
    "model_problem",
    "model_solution",
    "model_derivative",
    "jump_matrix",
    "jump_product",
    "jump_product_check",
    "psi_phi",
    "solution_psi_phi",
    "ode_residual",
    "constant_jump_residual",
    "g_matrices",
    "infinity_solution",
    "ray_jump",
    "ray_jump_residual",
    "pcf_at_zero",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_PI = math.sqrt(math.pi)
CONSISTENCY_TOL = 1e-10
_LIMIT_STEP = 1e-4


@dataclass(frozen=True)
class ModelProblem:
    """Constant-jump model problem at one stationary point.

    ``which`` is 0 for the lam0 type and 1 for the lam1 type. ``psi`` and
    ``phi`` are the coefficients of the actual solution (Psi Phi = vartheta).
    """

    vartheta: complex
    r1_at: complex
    r2_at: complex
    which: int
    psi: complex
    phi: complex

    @property
    def s(self) -> int:
        return 1 if self.which == 0 else -1


def _psi_exact(r1: complex, vt: complex, which: int) -> complex:
    if vt == 0:
        return 0j
    if which == 0:
        return _SQRT_2PI * cmath.exp(1.5 * math.pi * vt - 0.25j * math.pi) * reciprocal_cgamma(1j * vt) / r1
    return _SQRT_2PI * cmath.exp(-0.5 * math.pi * vt + 0.25j * math.pi) * reciprocal_cgamma(-1j * vt) / r1


def _phi_exact(r2: complex, vt: complex, which: int) -> complex:
    if vt == 0:
        return 0j
    if which == 0:
        return _SQRT_2PI * cmath.exp(-2.5 * math.pi * vt + 0.25j * math.pi) * reciprocal_cgamma(-1j * vt) / r2
    return _SQRT_2PI * cmath.exp(-0.5 * math.pi * vt - 0.25j * math.pi) * reciprocal_cgamma(1j * vt) / r2


def model_problem(r1_at: complex, r2_at: complex, which: int, vartheta: complex | None = None) -> ModelProblem:
    """Build a model problem; vartheta defaults to -log(1 - r1 r2) / (2 pi) (principal).

    Raises
    ------
    DomainError
        If vartheta is inconsistent with 1 - r1 r2, or if a reflection value
        is zero while vartheta is not.
    """
    if which not in (0, 1):
        raise ValueError("which must be 0 or 1")
    r1, r2 = complex(r1_at), complex(r2_at)
    d = 1.0 - r1 * r2
    if d == 0:
        raise DomainError("1 - r1 r2 = 0: vartheta is undefined")
    vt = -cmath.log(d) / (2.0 * math.pi) if vartheta is None else complex(vartheta)
    if abs(cmath.exp(-2.0 * math.pi * vt) - d) > CONSISTENCY_TOL * max(1.0, abs(d)):
        raise DomainError("vartheta is inconsistent with 1 - r1 r2 = exp(-2 pi vartheta)")
    if vt != 0 and (r1 == 0 or r2 == 0):
        raise DomainError("zero reflection value with nonzero vartheta")
    if vt == 0:
        psi, phi = _degenerate_coefficients(r1, r2, which)
    else:
        psi, phi = _psi_exact(r1, vt, which), _phi_exact(r2, vt, which)
    return ModelProblem(vt, r1, r2, which, psi, phi)


def _degenerate_coefficients(r1: complex, r2: complex, which: int) -> tuple[complex, complex]:
    """(Psi, Phi) as vartheta -> 0 with r1 r2 = 0.

    The coefficient fed by the zero reflection value vanishes; the other is
    the limit of vartheta / (vanishing one), finite since 1/Gamma(+/- i vt) ~ +/- i vt.
    """
    rot = cmath.exp((-0.25j if which == 0 else 0.25j) * math.pi) / _SQRT_2PI
    psi = r2 * rot.conjugate() if r1 == 0 else 0j
    phi = r1 * rot if r2 == 0 else 0j
    return psi, phi


def solution_psi_phi(problem: ModelProblem) -> tuple[complex, complex]:
    """Coefficients (Psi, Phi) of the actual solution."""
    return problem.psi, problem.phi


def psi_phi(problem: ModelProblem) -> tuple[complex, complex]:
    """Quoted closed forms with (-1) = e^{i pi}.

    lam0: Psi = sqrt(2 pi) (-1)^{i vt + 1/2} e^{-3 pi i/4 + pi vt/2} / (r1 Gamma(i vt)),
          Phi = -sqrt(2 pi) (-1)^{-i vt + 1/2} e^{-pi i/4 + pi vt/2} / (r2 Gamma(-i vt));
    lam1: Psi = i m12, Phi = -i m21 with the lam1 moments
          m12 = sqrt(2 pi) i e^{-pi vt/2} e^{-3 pi i/4} / (r1 Gamma(-i vt)),
          m21 = sqrt(2 pi) i e^{-pi vt/2} e^{-pi i/4} / (r2 Gamma(i vt)).

    For the lam1 type these coincide with :func:`solution_psi_phi`; for the
    lam0 type Psi_quoted = (1 - r1 r2) Psi_solution. Returns (0, 0) for
    vartheta = 0.
    """
    vt, r1, r2 = problem.vartheta, problem.r1_at, problem.r2_at
    if vt == 0:
        return 0j, 0j
    if problem.which == 0:
        psi = (_SQRT_2PI * cmath.exp(1j * math.pi * (1j * vt + 0.5))
               * cmath.exp(-0.75j * math.pi + 0.5 * math.pi * vt) * reciprocal_cgamma(1j * vt) / r1)
        phi = (-_SQRT_2PI * cmath.exp(1j * math.pi * (-1j * vt + 0.5))
               * cmath.exp(-0.25j * math.pi + 0.5 * math.pi * vt) * reciprocal_cgamma(-1j * vt) / r2)
        return psi, phi
    m12 = _SQRT_2PI * 1j * cmath.exp(-0.5 * math.pi * vt - 0.75j * math.pi) * reciprocal_cgamma(-1j * vt) / r1
    m21 = _SQRT_2PI * 1j * cmath.exp(-0.5 * math.pi * vt - 0.25j * math.pi) * reciprocal_cgamma(1j * vt) / r2
    return 1j * m12, -1j * m21


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _half_plane_constants(which: int, upper: bool):
    """(k1, arg k1, k2, arg k2) for M11 = k1^{p1} D(k1 z), M22 = k2^{p2} D(k2 z).

    The arguments are the branches used for the powers of k; for the lam0
    type in the lower half-plane they are shifted by -2 pi so that the
    normalization z^{-/+ i vt} has its cut on the positive axis.
    """
    q = math.pi / 4.0
    if which == 0:
        if upper:
            return cmath.exp(-1j * q), -q, cmath.exp(-3j * q), -3.0 * q
        return cmath.exp(3j * q), 3.0 * q - 2.0 * math.pi, cmath.exp(1j * q), q - 2.0 * math.pi
    if upper:
        return cmath.exp(-3j * q), -3.0 * q, cmath.exp(-1j * q), -q
    return cmath.exp(1j * q), q, cmath.exp(3j * q), 3.0 * q


def _orders(problem: ModelProblem) -> tuple[complex, complex]:
    """Orders (nu11, nu22) of the parabolic cylinder functions."""
    vt = problem.vartheta
    return (-1j * vt, 1j * vt) if problem.which == 0 else (1j * vt, -1j * vt)


def _diagonal(problem: ModelProblem, z: complex, upper: bool):
    """M11, M11', M22, M22' at z with the given half-plane formulas."""
    k1, a1, k2, a2 = _half_plane_constants(problem.which, upper)
    nu1, nu2 = _orders(problem)
    c1 = cmath.exp(-nu1 * 1j * a1)  # k1^{-nu1} with arg k1 = a1
    c2 = cmath.exp(-nu2 * 1j * a2)
    w1, w2 = k1 * z, k2 * z
    m11 = c1 * complex(pcf_D(nu1, w1))
    d11 = c1 * k1 * complex(pcf_D_prime(nu1, w1))
    m22 = c2 * complex(pcf_D(nu2, w2))
    d22 = c2 * k2 * complex(pcf_D_prime(nu2, w2))
    return m11, d11, m22, d22


def _side(z: complex, side: str | None) -> bool:
    if z.imag > 0:
        return True
    if z.imag < 0:
        return False
    if side not in ("+", "-"):
        raise DomainError("on the real axis a side ('+' above, '-' below) is required")
    return side == "+"


def _assemble(problem: ModelProblem, z: complex, m11, d11, m22, d22, psi, phi) -> np.ndarray:
    s = problem.s
    m21 = (0.5j * z * m11 - s * d11) / psi
    m12 = (-0.5j * z * m22 - s * d22) / phi
    return np.array([[m11, m12], [m21, m22]], dtype=complex)


def _with_vartheta(problem: ModelProblem, vt: complex) -> ModelProblem:
    # a zero reflection value leaves its coefficient undefined; the entry it
    # feeds is not used by the caller
    nan = complex(math.nan, math.nan)
    psi = _psi_exact(problem.r1_at, vt, problem.which) if problem.r1_at != 0 else nan
    phi = _phi_exact(problem.r2_at, vt, problem.which) if problem.r2_at != 0 else nan
    return ModelProblem(vt, problem.r1_at, problem.r2_at, problem.which, psi, phi)


def _eval(problem: ModelProblem, z: complex, upper: bool) -> np.ndarray:
    if problem.vartheta != 0:
        return _assemble(problem, z, *_diagonal(problem, z, upper), problem.psi, problem.phi)
    # vartheta = 0: the diagonal is exact, an off-diagonal entry with nonzero
    # reflection is the removable 0/0 limit in vartheta, taken by a
    # symmetric Richardson-extrapolated average
    m11, _, m22, _ = _diagonal(problem, z, upper)
    out = np.array([[m11, 0j], [0j, m22]], dtype=complex)
    need21 = problem.r1_at != 0
    need12 = problem.r2_at != 0
    if need12 or need21:
        def avg(h):
            acc = np.zeros((2, 2), dtype=complex)
            for vt in (h, -h):
                p = _with_vartheta(problem, vt)
                acc += _assemble(p, z, *_diagonal(p, z, upper), p.psi, p.phi)
            return 0.5 * acc

        h = _LIMIT_STEP
        lim = (4.0 * avg(0.5 * h) - avg(h)) / 3.0
        if need21:
            out[1, 0] = lim[1, 0]
        if need12:
            out[0, 1] = lim[0, 1]
    return out


def model_solution(problem: ModelProblem, lambda_tilde, side: str | None = None) -> np.ndarray:
    """M(z) at a point off the real axis, or its boundary value with ``side``.

    Returns a 2x2 complex array.
    """
    z = complex(lambda_tilde)
    return _eval(problem, z, _side(z, side))


def model_derivative(problem: ModelProblem, lambda_tilde, side: str | None = None) -> np.ndarray:
    """dM/dz from the system itself: -s A(z) M."""
    z = complex(lambda_tilde)
    M = model_solution(problem, z, side)
    return -problem.s * _coefficient(problem, z) @ M


def _coefficient(problem: ModelProblem, z: complex) -> np.ndarray:
    return np.array([[-0.5j * z, problem.psi], [problem.phi, 0.5j * z]], dtype=complex)


def ode_residual(problem: ModelProblem, lambda_tilde, h: float = 1e-3) -> float:
    """max |dM/dz + s A M| with dM/dz from an 8th-order central difference."""
    z = complex(lambda_tilde)
    upper = _side(z, None) if z.imag != 0 else True
    coef = (4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0)
    dM = np.zeros((2, 2), dtype=complex)
    for j, c in enumerate(coef, start=1):
        dM += c * (_eval(problem, z + j * h, upper) - _eval(problem, z - j * h, upper))
    dM /= h
    M = _eval(problem, z, upper)
    return float(np.max(np.abs(dM + problem.s * _coefficient(problem, z) @ M)))


def jump_matrix(problem: ModelProblem) -> np.ndarray:
    r1, r2 = problem.r1_at, problem.r2_at
    return np.array([[1.0 - r1 * r2, -r2], [r1, 1.0]], dtype=complex)


def constant_jump_residual(problem: ModelProblem, points=(-2.0, -1.0, 1.0, 2.0)) -> float:
    """max over real points of |M_-^{-1} M_+ - J|."""
    J = jump_matrix(problem)
    worst = 0.0
    for x in points:
        Mp = model_solution(problem, complex(x), "+")
        Mm = model_solution(problem, complex(x), "-")
        worst = max(worst, float(np.max(np.abs(np.linalg.solve(Mm, Mp) - J))))
    return worst


# ---------------------------------------------------------------------------
# Product at the origin from closed-form values
# ---------------------------------------------------------------------------

def pcf_at_zero(nu: complex) -> tuple[complex, complex]:
    """(D_nu(0), D_nu'(0)) = (2^{nu/2} sqrt(pi) / Gamma((1-nu)/2), -2^{(nu+1)/2} sqrt(pi) / Gamma(-nu/2))."""
    nu = complex(nu)
    d0 = 2.0 ** (0.5 * nu) * _SQRT_PI * reciprocal_cgamma(0.5 * (1.0 - nu))
    d1 = -(2.0 ** (0.5 * (nu + 1.0))) * _SQRT_PI * reciprocal_cgamma(-0.5 * nu)
    return d0, d1


def _at_origin(problem: ModelProblem, upper: bool) -> np.ndarray:
    k1, a1, k2, a2 = _half_plane_constants(problem.which, upper)
    nu1, nu2 = _orders(problem)
    c1 = cmath.exp(-nu1 * 1j * a1)
    c2 = cmath.exp(-nu2 * 1j * a2)
    D1, D1p = pcf_at_zero(nu1)
    D2, D2p = pcf_at_zero(nu2)
    s = problem.s
    m11, m22 = c1 * D1, c2 * D2
    m21 = -s * c1 * k1 * D1p / problem.psi
    m12 = -s * c2 * k2 * D2p / problem.phi
    return np.array([[m11, m12], [m21, m22]], dtype=complex)


def jump_product(problem: ModelProblem) -> np.ndarray:
    """M_-(0)^{-1} M_+(0) from the closed-form values at the origin."""
    if problem.vartheta == 0:
        Mp = model_solution(problem, 0j, "+")
        Mm = model_solution(problem, 0j, "-")
    else:
        Mp = _at_origin(problem, True)
        Mm = _at_origin(problem, False)
    return np.linalg.solve(Mm, Mp)


def jump_product_check(problem: ModelProblem) -> float:
    """max |M_-(0)^{-1} M_+(0) - J|."""
    return float(np.max(np.abs(jump_product(problem) - jump_matrix(problem))))


# ---------------------------------------------------------------------------
# Sector transformations back to the ray problem
# ---------------------------------------------------------------------------

def _power(problem: ModelProblem, z: complex, p: complex) -> complex:
    """z^p with the normalization branch of the problem type."""
    if problem.which == 0:
        arg = cmath.phase(z)
        if arg <= 0.0:
            arg += 2.0 * math.pi
        return cmath.exp(p * (math.log(abs(z)) + 1j * arg))
    return cmath.exp(p * cmath.log(z))


def _g0(problem: ModelProblem, z: complex) -> np.ndarray:
    vt = problem.vartheta
    if problem.which == 0:
        e = cmath.exp(0.25j * z * z) * _power(problem, z, -1j * vt)
    else:
        e = cmath.exp(-0.25j * z * z) * _power(problem, z, 1j * vt)
    return np.array([[e, 0j], [0j, 1.0 / e]], dtype=complex)


def _sector(problem: ModelProblem, z: complex) -> int:
    """Sector label 0..4 of z (0 = the two sectors containing the imaginary axis)."""
    a = cmath.phase(z)
    q = math.pi / 4.0
    if 0.0 < a < q:
        return 1
    if 3.0 * q < a < math.pi:
        return 2
    if -math.pi < a < -3.0 * q:
        return 3
    if -q < a < 0.0:
        return 4
    return 0


def g_matrices(problem: ModelProblem, z: complex) -> np.ndarray:
    """G_j(z) with M_model = M_ray G_j in sector j.

    The triangular factors in the four real-axis sectors are
    U(-r2/(1-r1r2)), L(r1), U(r2), L(-r1/(1-r1r2)) at angles (0, pi/4),
    (3pi/4, pi), (-pi, -3pi/4), (-pi/4, 0) for the lam0 type; the lam1 type
    is the mirror image z -> -conj(z) of that arrangement.
    """
    z = complex(z)
    r1, r2 = problem.r1_at, problem.r2_at
    d = 1.0 - r1 * r2
    U_a = np.array([[1.0, -r2 / d], [0.0, 1.0]], dtype=complex)
    L_b = np.array([[1.0, 0.0], [r1, 1.0]], dtype=complex)
    U_c = np.array([[1.0, r2], [0.0, 1.0]], dtype=complex)
    L_d = np.array([[1.0, 0.0], [-r1 / d, 1.0]], dtype=complex)
    j = _sector(problem, z)
    if problem.which == 1:
        j = {0: 0, 1: 2, 2: 1, 3: 4, 4: 3}[j]
    tri = {0: np.eye(2, dtype=complex), 1: U_a, 2: L_b, 3: U_c, 4: L_d}[j]
    return _g0(problem, z) @ tri


def infinity_solution(problem: ModelProblem, z: complex) -> np.ndarray:
    """M_ray(z) = M_model(z) G_j(z)^{-1}; tends to I at infinity."""
    z = complex(z)
    return model_solution(problem, z) @ np.linalg.inv(g_matrices(problem, z))


def ray_jump(problem: ModelProblem, z: complex) -> np.ndarray:
    """Jump of M_ray on the ray through z (arg z = +/- pi/4, +/- 3 pi/4).

    Rays are oriented away from the origin for the lam0 type and toward it
    for the lam1 type; '+' is the left side.
    """
    z = complex(z)
    vt = problem.vartheta
    r1, r2 = problem.r1_at, problem.r2_at
    d = 1.0 - r1 * r2
    a = cmath.phase(z)
    if problem.which == 0:
        e = cmath.exp(0.5j * z * z) * _power(problem, z, -2j * vt)
        if 0 < a < math.pi / 2:
            return np.array([[1.0, -e * r2 / d], [0.0, 1.0]], dtype=complex)
        if math.pi / 2 < a:
            return np.array([[1.0, 0.0], [-r1 / e, 1.0]], dtype=complex)
        if a < -math.pi / 2:
            return np.array([[1.0, e * r2], [0.0, 1.0]], dtype=complex)
        return np.array([[1.0, 0.0], [r1 / e / d, 1.0]], dtype=complex)
    e = cmath.exp(-0.5j * z * z) * _power(problem, z, 2j * vt)
    if math.pi / 2 < a:
        return np.array([[1.0, -e * r2 / d], [0.0, 1.0]], dtype=complex)
    if 0 < a < math.pi / 2:
        return np.array([[1.0, 0.0], [-r1 / e, 1.0]], dtype=complex)
    if -math.pi / 2 < a < 0:
        return np.array([[1.0, e * r2], [0.0, 1.0]], dtype=complex)
    return np.array([[1.0, 0.0], [r1 / e / d, 1.0]], dtype=complex)


def ray_jump_residual(problem: ModelProblem, radii=(0.5, 1.0, 2.0, 4.0), eps: float = 1e-9) -> float:
    """max |M_-^{-1} M_+ - J_ray| over points on the four rays.

    Side values are taken at points displaced by eps normal to the ray.
    """
    worst = 0.0
    for ang in (math.pi / 4, 3 * math.pi / 4, -3 * math.pi / 4, -math.pi / 4):
        direction = cmath.exp(1j * ang)
        if problem.which == 1:
            direction = -direction  # oriented toward the origin
        left = 1j * direction
        for r in radii:
            z = r * cmath.exp(1j * ang)
            Mp = infinity_solution(problem, z + eps * left)
            Mm = infinity_solution(problem, z - eps * left)
            J = ray_jump(problem, z)
            worst = max(worst, float(np.max(np.abs(np.linalg.solve(Mm, Mp) - J))))
    return worst
