"""
Phase geometry for the long-time analysis.

The oscillatory factor of the jump is exp(2 i t f) with

    f(lam) = lam (xi + 2 alpha lam + 4 beta lam^2),    xi = x / t,

whose two real stationary points lam0 < lam1 (for beta > 0) exist when
alpha^2 - 3 beta xi > 0. This module gives the stationary points, the sign
of Re(i f) that decides which triangular factor may be continued into
which region, and node sets on the steepest-descent legs through the
stationary points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SectorError

__all__ = [
    "PhaseGeometry",
    "ContourDescriptor",
    "stationary_points",
    "geometry",
    "phase_theta",
    "phase_f",
    "phase_f_prime",
    "sign_re_if",
    "steepest_contours",
    "leg_decay_exponent",
]

LOG_TINY = math.log(1e-16)


def stationary_points(alpha: float, beta: float, xi: float) -> tuple[float, float]:
    """Roots of f'(lam) = xi + 4 alpha lam + 12 beta lam^2.

    Returns
    -------
    (lam0, lam1) with lam0 = (-alpha - sqrt(D)) / (6 beta) and
    lam1 = (-alpha + sqrt(D)) / (6 beta), D = alpha^2 - 3 beta xi.

    Raises
    ------
    SectorError
        If D <= 0 (coalescing or complex stationary points).
    DomainError
        If beta == 0.
    """
    if beta == 0:
        raise DomainError("beta = 0 reduces the phase to a single stationary point; not supported")
    disc = alpha * alpha - 3.0 * beta * xi
    if not disc > 0:
        raise SectorError(f"alpha^2 - 3 beta xi = {disc:g} <= 0: stationary points coalesce")
    root = math.sqrt(disc)
    return (-alpha - root) / (6.0 * beta), (-alpha + root) / (6.0 * beta)


@dataclass(frozen=True)
class PhaseGeometry:
    """Stationary-point data for one ray xi = x / t."""

    alpha: float
    beta: float
    xi: float
    lambda0: float
    lambda1: float
    discriminant: float

    @property
    def a0(self) -> float:
        """alpha + 6 beta lam0 (= -sqrt(D) < 0)."""
        return self.alpha + 6.0 * self.beta * self.lambda0

    @property
    def a1(self) -> float:
        """alpha + 6 beta lam1 (= +sqrt(D) > 0)."""
        return self.alpha + 6.0 * self.beta * self.lambda1

    def f(self, lam):
        return phase_f(lam, self.xi, self.alpha, self.beta)


def geometry(alpha: float, beta: float, xi: float) -> PhaseGeometry:
    lam0, lam1 = stationary_points(alpha, beta, xi)
    return PhaseGeometry(float(alpha), float(beta), float(xi), lam0, lam1,
                         alpha * alpha - 3.0 * beta * xi)


def phase_theta(x, t, lam, alpha: float, beta: float):
    """theta = lam (x + (2 alpha lam + 4 beta lam^2) t)."""
    lam = np.asarray(lam) if np.ndim(lam) else lam
    return lam * (x + (2.0 * alpha * lam + 4.0 * beta * lam * lam) * t)


def phase_f(lam, xi: float, alpha: float, beta: float):
    """f = theta / t = lam (xi + 2 alpha lam + 4 beta lam^2)."""
    return lam * (xi + 2.0 * alpha * lam + 4.0 * beta * lam * lam)


def phase_f_prime(lam, xi: float, alpha: float, beta: float):
    return xi + 4.0 * alpha * lam + 12.0 * beta * lam * lam


def sign_re_if(lam, geo: PhaseGeometry):
    """Sign of Re(i f(lam)); exactly 0 on the real axis."""
    lam_arr = np.asarray(lam, dtype=complex)
    val = np.real(1j * geo.f(lam_arr))
    out = np.sign(val)
    out = np.where(lam_arr.imag == 0.0, 0.0, out)
    return int(out) if out.ndim == 0 else out.astype(int)


@dataclass(frozen=True)
class ContourDescriptor:
    """One steepest-descent leg lam = anchor + sign * anchor * rho * direction.

    ``sign`` is +1 for the leg through lam1 and -1 for the leg through lam0,
    so that rho = sqrt(2) reaches the point on the imaginary axis.
    """

    anchor: float
    direction: complex
    sign: int
    rho_min: float
    rho_max: float
    rho: np.ndarray
    nodes: np.ndarray

    def point(self, rho):
        return self.anchor + self.sign * self.anchor * np.asarray(rho) * self.direction


def leg_decay_exponent(geo: PhaseGeometry, rho, t: float = 1.0):
    """Exponent 4 lam1^2 rho^2 t (sqrt(2) beta lam1 rho - 6 beta lam1 - alpha).

    This is log|exp(-2 i t (f(lam) - f(lam1)))| on the leg
    lam = lam1 + lam1 rho e^{3 pi i / 4}; f is cubic, so the identity is exact.
    """
    lam1 = geo.lambda1
    rho = np.asarray(rho, dtype=float)
    return 4.0 * lam1 * lam1 * rho * rho * t * (
        math.sqrt(2.0) * geo.beta * lam1 * rho - 6.0 * geo.beta * lam1 - geo.alpha
    )


def _log_factor(geo: PhaseGeometry, pts, t: float, upper_factor: bool):
    # log|e^{-2itf}| = 2 t Im f ; log|e^{2itf}| = -2 t Im f, relative to the anchor
    im = np.imag(geo.f(pts))
    return 2.0 * t * im if upper_factor else -2.0 * t * im


def steepest_contours(geo: PhaseGeometry, t: float = 1.0, n: int = 201):
    """Node sets on L and L* as parametrized by rho in (-inf, sqrt(2)].

    Each of L and L* is returned as a pair (leg through lam1, leg through
    lam0). The lower limit of rho is where the decaying exponential carried
    by the leg drops below 1e-16 (e^{-2itf} on L, e^{2itf} on L*).
    The parametrization assumes lam0 < 0 < lam1.
    """
    if not (geo.lambda0 < 0.0 < geo.lambda1):
        raise SectorError("the rho-parametrized legs need lam0 < 0 < lam1")
    if t <= 0:
        raise DomainError("t must be positive")
    legs = []
    for conj in (False, True):
        pair = []
        for anchor, sign, base in (
            (geo.lambda1, +1, np.exp(3j * np.pi / 4)),
            (geo.lambda0, -1, np.exp(1j * np.pi / 4)),
        ):
            direction = np.conj(base) if conj else base

            def excess(rho, anchor=anchor, sign=sign, direction=direction):
                p = anchor + sign * anchor * rho * direction
                f0 = _log_factor(geo, np.array([anchor + 0j]), t, not conj)[0]
                return _log_factor(geo, np.array([p]), t, not conj)[0] - f0 - LOG_TINY

            lo = -1.0
            while excess(lo) > 0 and lo > -1e6:
                lo *= 2.0
            hi = 0.0
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if excess(mid) > 0:
                    hi = mid
                else:
                    lo = mid
            rho = np.linspace(lo, math.sqrt(2.0), n)
            nodes = anchor + sign * anchor * rho * direction
            pair.append(ContourDescriptor(anchor, complex(direction), sign, lo, math.sqrt(2.0), rho, nodes))
        legs.append(tuple(pair))
    return legs[0], legs[1]
