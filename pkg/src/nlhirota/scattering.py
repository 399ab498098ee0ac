"""
Direct scattering for the reverse space-time nonlocal Hirota equation.

At t = 0 the Lax x-part is

    phi_x = (-i lam sigma3 + Q(x)) phi,    Q(x) = [[0, q0(x)], [q0(-x), 0]],

and the Jost solutions are normalized as phi_pm(x) ~ exp(-i lam x sigma3)
for x -> +-inf. Their gauge mu_pm = phi_pm exp(i lam x sigma3) tends to I.
The scattering matrix is S = phi_+^{-1} phi_-, evaluated at x = 0.

Propagation uses a fourth-order Magnus integrator with closed-form 2x2
exponentials, vectorized over the spectral parameter. Each step is an
exact SL(2) matrix, so det S = 1 holds to rounding. Because the step grid
is mirror symmetric about x = 0, the identity s12 = s21 also holds to
rounding.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import interpolate, optimize, special

from .errors import DomainError, IntegrationError, SpectralSingularityError

log = logging.getLogger(__name__)

__all__ = [
    "Profile",
    "JostSolution",
    "ScatteringMatrix",
    "ScatteringData",
    "load_profile_table",
    "jost_solutions",
    "scattering_matrix",
    "scattering_entries",
    "reflection_coefficients",
    "born_reflection",
    "default_grid",
]

TAIL_TOL = 1e-12
DEFAULT_STEP = 0.01
SINGULAR_TOL = 1e-10

_GAUSS_C = (0.5 - math.sqrt(3.0) / 6.0, 0.5 + math.sqrt(3.0) / 6.0)
_COMM = math.sqrt(3.0) / 12.0


# ---------------------------------------------------------------------------
# Initial data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """Initial datum q0(x).

    Parameters
    ----------
    kind : {'gaussian', 'sech', 'table'}
        gaussian: amplitude * exp(-((x - center) / width)**2);
        sech: amplitude * sech((x - center) / width);
        table: cubic interpolation of sampled complex values, zero outside.
    amplitude, width, center : float
    table_x, table_q : tuple, optional
        Samples for ``kind='table'`` (strictly increasing x).
    domain_halfwidth : float, optional
        Truncation X. When omitted it is the smallest X with
        int_{|x|>X} |q0| < 1e-12.
    """

    kind: str = "gaussian"
    amplitude: float = 0.5
    width: float = 1.0
    center: float = 0.0
    table_x: Optional[tuple] = None
    table_q: Optional[tuple] = None
    domain_halfwidth: Optional[float] = None
    _spline: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("gaussian", "sech", "table"):
            raise DomainError(f"unknown profile kind {self.kind!r}")
        if self.kind == "table":
            if self.table_x is None or self.table_q is None:
                raise DomainError("table profile needs table_x and table_q")
            x = np.asarray(self.table_x, dtype=float)
            q = np.asarray(self.table_q, dtype=complex)
            if x.ndim != 1 or x.size < 4 or x.size != q.size:
                raise DomainError("table profile needs >= 4 matching samples")
            if np.any(np.diff(x) <= 0):
                raise DomainError("table profile x must be strictly increasing")
            spline = interpolate.CubicSpline(x, q, extrapolate=False)
            object.__setattr__(self, "_spline", spline)
        elif not self.width > 0:
            raise DomainError("profile width must be positive")
        if self.domain_halfwidth is not None and not self.domain_halfwidth > 0:
            raise DomainError("domain_halfwidth must be positive")

    @property
    def is_zero(self) -> bool:
        if self.kind == "table":
            return not np.any(np.asarray(self.table_q) != 0)
        return self.amplitude == 0.0

    def q0(self, x):
        """Evaluate q0 at real points (vectorized)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "gaussian":
            return (self.amplitude * np.exp(-((x - self.center) / self.width) ** 2)).astype(complex)
        if self.kind == "sech":
            u = np.abs(x - self.center) / self.width
            # sech(u) = 2 e^{-u} / (1 + e^{-2u}) avoids overflow
            return (self.amplitude * 2.0 * np.exp(-u) / (1.0 + np.exp(-2.0 * u))).astype(complex)
        out = self._spline(x)
        return np.where(np.isnan(out), 0.0, out).astype(complex)

    def tail_mass(self, X: float) -> float:
        """int_{|x| > X} |q0(x)| dx."""
        a, w, c = abs(self.amplitude), self.width, self.center
        if self.kind == "gaussian":
            return 0.5 * a * w * math.sqrt(math.pi) * (
                special.erfc((X - c) / w) + special.erfc((X + c) / w)
            )
        if self.kind == "sech":
            return 2.0 * a * w * (math.atan(math.exp(-(X - c) / w)) + math.atan(math.exp(-(X + c) / w)))
        x = np.asarray(self.table_x, dtype=float)
        if X >= max(abs(x[0]), abs(x[-1])):
            return 0.0
        grid = np.linspace(x[0], x[-1], 20001)
        vals = np.abs(self.q0(grid))
        vals[np.abs(grid) <= X] = 0.0
        return float(np.trapezoid(vals, grid))

    def truncation(self, tol: float = TAIL_TOL) -> float:
        """Half-width X of the integration domain."""
        if self.domain_halfwidth is not None:
            return float(self.domain_halfwidth)
        if self.kind == "table":
            x = np.asarray(self.table_x, dtype=float)
            return float(max(abs(x[0]), abs(x[-1])))
        if self.is_zero:
            return 1.0
        lo = abs(self.center)
        hi = lo + self.width
        while self.tail_mass(hi) >= tol:
            hi = lo + 2.0 * (hi - lo)
        X = optimize.brentq(lambda s: self.tail_mass(s) - tol, lo, hi, xtol=1e-6)
        return float(math.ceil(X * 100.0) / 100.0)


def load_profile_table(path, domain_halfwidth: Optional[float] = None) -> Profile:
    """Read a whitespace-separated table with columns x, Re q0 [, Im q0]."""
    data = np.loadtxt(path, ndmin=2)
    if data.shape[1] not in (2, 3):
        raise DomainError(f"{path}: expected 2 or 3 columns, got {data.shape[1]}")
    x = data[:, 0]
    q = data[:, 1] + (1j * data[:, 2] if data.shape[1] == 3 else 0.0)
    return Profile(kind="table", table_x=tuple(x), table_q=tuple(q), domain_halfwidth=domain_halfwidth)


# ---------------------------------------------------------------------------
# Magnus propagation
# ---------------------------------------------------------------------------

def _expm_traceless(a, b, c):
    """exp([[a, b], [c, -a]]) entrywise for arrays a, b, c."""
    s = np.sqrt(a * a + b * c)
    small = np.abs(s) < 1e-6
    s_safe = np.where(small, 1.0, s)
    ch = np.where(small, 1.0 + s * s / 2.0, np.cosh(s_safe))
    sh = np.where(small, 1.0 + s * s / 6.0, np.sinh(s_safe) / s_safe)
    return ch + sh * a, sh * b, sh * c, ch - sh * a


def _step_nodes(X: float, step: float):
    n = max(1, int(math.ceil(X / step)))
    return n, X / n


def _propagate(profile: Profile, lam, x_from: float, x_to: float, nsteps: int):
    """Propagator U(x_to, x_from) of phi_x = (-i lam sigma3 + Q) phi.

    Returns the four entries as arrays shaped like ``lam``.
    """
    lam = np.asarray(lam, dtype=complex)
    h = (x_to - x_from) / nsteps
    u11 = np.ones_like(lam)
    u12 = np.zeros_like(lam)
    u21 = np.zeros_like(lam)
    u22 = np.ones_like(lam)
    if profile.is_zero:
        e = np.exp(-1j * lam * (x_to - x_from))
        return e, u12, u21, 1.0 / e
    xs = x_from + h * np.arange(nsteps)
    x1 = xs + _GAUSS_C[0] * h
    x2 = xs + _GAUSS_C[1] * h
    p1, m1 = profile.q0(x1), profile.q0(-x1)
    p2, m2 = profile.q0(x2), profile.q0(-x2)
    ilh = -1j * lam * h
    for k in range(nsteps):
        # Omega = h/2 (A1 + A2) + sqrt(3)/12 h^2 [A2, A1]
        b1, c1, b2, c2 = p1[k], m1[k], p2[k], m2[k]
        comm_a = b2 * c1 - b1 * c2
        comm_b = -1j * lam * 2.0 * (b1 - b2)
        comm_c = -1j * lam * 2.0 * (c2 - c1)
        wa = ilh + _COMM * h * h * comm_a
        wb = 0.5 * h * (b1 + b2) + _COMM * h * h * comm_b
        wc = 0.5 * h * (c1 + c2) + _COMM * h * h * comm_c
        e11, e12, e21, e22 = _expm_traceless(wa, wb, wc)
        u11, u12, u21, u22 = (
            e11 * u11 + e12 * u21,
            e11 * u12 + e12 * u22,
            e21 * u11 + e22 * u21,
            e21 * u12 + e22 * u22,
        )
    return u11, u12, u21, u22


def _jost_at_zero(profile: Profile, lam, step: float):
    X = profile.truncation()
    n, _ = _step_nodes(X, step)
    lam = np.asarray(lam, dtype=complex)
    a11, a12, a21, a22 = _propagate(profile, lam, -X, 0.0, n)
    b11, b12, b21, b22 = _propagate(profile, lam, X, 0.0, n)
    e = np.exp(1j * lam * X)
    # mu_-(0) = U(0,-X) e^{i lam X sigma3},  mu_+(0) = U(0,X) e^{-i lam X sigma3}
    mm = (a11 * e, a12 / e, a21 * e, a22 / e)
    mp = (b11 / e, b12 * e, b21 / e, b22 * e)
    return mm, mp


def _check_finite(arrs, lam):
    for a in arrs:
        bad = ~np.isfinite(a)
        if np.any(bad):
            where = np.asarray(lam)[np.nonzero(bad)[0][0]] if np.ndim(lam) else lam
            raise IntegrationError(f"non-finite propagator at lambda = {where}")


# ---------------------------------------------------------------------------
# Public types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JostSolution:
    """Gauge-normalized Jost solutions at the matching point x = 0."""

    lam: complex
    mu_minus: np.ndarray
    mu_plus: np.ndarray
    det_defect: float


@dataclass(frozen=True)
class ScatteringMatrix:
    """Scattering matrix entries at one spectral point."""

    lam: complex
    s11: complex
    s12: complex
    s21: complex
    s22: complex

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.s11, self.s12], [self.s21, self.s22]])

    @property
    def det_defect(self) -> float:
        return abs(self.s11 * self.s22 - self.s12 * self.s21 - 1.0)

    @property
    def symmetry_defect(self) -> float:
        return abs(self.s12 - self.s21)


def jost_solutions(q0: Profile, lam, step: float = DEFAULT_STEP) -> JostSolution:
    """Jost solutions mu_-(0), mu_+(0) at one spectral point.

    mu_- starts from I at x = -X and mu_+ from I at x = +X.
    """
    mm, mp = _jost_at_zero(q0, np.array([lam]), step)
    _check_finite(mm + mp, lam)
    mu_m = np.array([[mm[0][0], mm[1][0]], [mm[2][0], mm[3][0]]])
    mu_p = np.array([[mp[0][0], mp[1][0]], [mp[2][0], mp[3][0]]])
    defect = max(abs(np.linalg.det(mu_m) - 1.0), abs(np.linalg.det(mu_p) - 1.0))
    return JostSolution(complex(lam), mu_m, mu_p, float(defect))


def scattering_entries(q0: Profile, lam, step: float = DEFAULT_STEP):
    """s11, s12, s21, s22 as arrays over ``lam`` (real or complex).

    Complex lam is used by the deformed-contour oracle; the entries are the
    ones of the truncated potential, which are entire in lam.
    """
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    mm, mp = _jost_at_zero(q0, lam_arr, step)
    _check_finite(mm + mp, lam_arr)
    # S = mu_+^{-1} mu_-, det mu_+ = 1
    p11, p12, p21, p22 = mp
    m11, m12, m21, m22 = mm
    s11 = p22 * m11 - p12 * m21
    s12 = p22 * m12 - p12 * m22
    s21 = -p21 * m11 + p11 * m21
    s22 = -p21 * m12 + p11 * m22
    if np.ndim(lam) == 0:
        return complex(s11[0]), complex(s12[0]), complex(s21[0]), complex(s22[0])
    return s11, s12, s21, s22


def scattering_matrix(q0: Profile, lam, step: float = DEFAULT_STEP) -> ScatteringMatrix:
    """Scattering matrix S(lam) = phi_+^{-1} phi_- at one real point."""
    s11, s12, s21, s22 = scattering_entries(q0, complex(lam), step)
    return ScatteringMatrix(complex(lam), s11, s12, s21, s22)


# ---------------------------------------------------------------------------
# Reflection data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScatteringData:
    """Reflection coefficients sampled on a real grid.

    Off-grid values come from cubic splines of the real and imaginary
    parts; outside the grid the coefficients are taken as zero.
    """

    alpha: float
    beta: float
    lambda_grid: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    s11: Optional[np.ndarray] = None
    s22: Optional[np.ndarray] = None
    profile: Optional[Profile] = None
    step: float = DEFAULT_STEP
    interp_order: int = 3
    det_defect: Optional[np.ndarray] = None
    symmetry_defect: Optional[np.ndarray] = None
    _splines: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = np.asarray(self.lambda_grid, dtype=float)
        if grid.ndim != 1 or grid.size < 4 or np.any(np.diff(grid) <= 0):
            raise DomainError("lambda_grid must be strictly increasing with >= 4 points")
        object.__setattr__(self, "lambda_grid", grid)
        object.__setattr__(self, "r1", np.asarray(self.r1, dtype=complex))
        object.__setattr__(self, "r2", np.asarray(self.r2, dtype=complex))
        splines = tuple(
            interpolate.CubicSpline(grid, arr, extrapolate=False) for arr in (self.r1, self.r2)
        )
        object.__setattr__(self, "_splines", splines)

    @classmethod
    def from_functions(cls, r1: Callable, r2: Callable, grid, alpha=0.0, beta=1.0) -> "ScatteringData":
        """Synthetic data from callables r1(lam), r2(lam)."""
        grid = np.asarray(grid, dtype=float)
        return cls(alpha, beta, grid, np.asarray(r1(grid), dtype=complex), np.asarray(r2(grid), dtype=complex))

    def _eval(self, k: int, lam):
        lam = np.asarray(lam, dtype=float)
        out = self._splines[k](lam)
        outside = np.isnan(out)
        if np.any(outside):
            log.debug("reflection coefficient requested outside the grid; using 0")
            out = np.where(outside, 0.0, out)
        return out if out.ndim else complex(out)

    def r1_at(self, lam):
        return self._eval(0, lam)

    def r2_at(self, lam):
        return self._eval(1, lam)

    def one_minus_r1r2(self, lam):
        return 1.0 - self.r1_at(lam) * self.r2_at(lam)

    def analytic_entries(self, lam):
        """s11, s12, s21, s22 at complex lam (needs the originating profile)."""
        if self.profile is None:
            raise DomainError("complex-lambda scattering needs the originating profile")
        return scattering_entries(self.profile, lam, self.step)


def default_grid(profile: Profile, n: int = 2001, half_range: float = 8.0,
                 tail: float = 1e-8, step: float = DEFAULT_STEP) -> np.ndarray:
    """Uniform grid on [-L, L], L >= half_range, widened until |r| < tail at the ends."""
    spacing = 2.0 * half_range / (n - 1)
    L = half_range
    for _ in range(20):
        s11, s12, s21, s22 = scattering_entries(profile, np.array([-L, L]), step)
        if max(np.max(np.abs(s21 / s11)), np.max(np.abs(s12 / s22))) < tail:
            break
        L *= 1.5
    m = int(round(2.0 * L / spacing)) + 1
    return np.linspace(-L, L, max(m, n))


def reflection_coefficients(q0: Profile, grid, alpha: float = 0.0, beta: float = 1.0,
                            step: float = DEFAULT_STEP) -> ScatteringData:
    """r1 = s21/s11 and r2 = s12/s22 on a real grid.

    Raises
    ------
    SpectralSingularityError
        If |s11| or |s22| drops below 1e-10 at a grid point.
    """
    grid = np.asarray(grid, dtype=float)
    s11, s12, s21, s22 = scattering_entries(q0, grid, step)
    small = (np.abs(s11) < SINGULAR_TOL) | (np.abs(s22) < SINGULAR_TOL)
    if np.any(small):
        where = grid[np.nonzero(small)[0][0]]
        raise SpectralSingularityError(
            f"spectral singularity / outside the solitonless sector near lambda = {where:.6g}"
        )
    det_def = np.abs(s11 * s22 - s12 * s21 - 1.0)
    sym_def = np.abs(s12 - s21)
    return ScatteringData(
        alpha, beta, grid, s21 / s11, s12 / s22, s11=s11, s22=s22, profile=q0, step=step,
        det_defect=det_def, symmetry_defect=sym_def,
    )


def born_reflection(q0: Profile, lam, epsabs: float = 1e-14) -> np.ndarray:
    """First Picard iterate of r1: int q0(y) exp(2 i lam y) dy.

    One iteration of the Volterra equation for mu_- from mu = I gives
    s21 = int q0(y) e^{2 i lam y} dy and s11 = 1. Evaluated with adaptive
    Gauss-Kronrod quadrature, independent of the Magnus propagator.
    """
    from scipy import integrate

    X = q0.truncation()
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.empty(lam_arr.shape, dtype=complex)
    for i, lm in enumerate(lam_arr):
        def f_re(y):
            return (q0.q0(y) * np.exp(2j * lm * y)).real

        def f_im(y):
            return (q0.q0(y) * np.exp(2j * lm * y)).imag

        lim = 200 + int(8 * abs(lm) * X)
        re = integrate.quad(f_re, -X, X, epsabs=epsabs, epsrel=1e-12, limit=lim)[0]
        im = integrate.quad(f_im, -X, X, epsabs=epsabs, epsrel=1e-12, limit=lim)[0]
        out[i] = re + 1j * im
    return out if np.ndim(lam) else complex(out[0])
