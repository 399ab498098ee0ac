"""
Numerical Riemann-Hilbert solver used as an independent oracle.

The problem M_+ = M_- V on an oriented contour, M -> I at infinity, is
rewritten as the singular integral equation for the boundary values
F = M_- on the contour,

    F(s) = I + C_-[F (V - I)](s),   C_- f(s) = -f(s)/2 + PV 1/(2 pi i) int f(tau)/(tau - s) dtau,

and discretized by a Nystrom method on composite Gauss-Legendre panels
(straight segments). The principal value is handled by global
singularity subtraction,

    PV int f/(tau - s) = sum_k w_k (f_k - f(s)) / (tau_k - s) + f'(s) w_s + f(s) L(s),

where L(s) = sum_panels log((b - s)/(a - s)) (real part on the node's own
panel) and f'(s) comes from Lagrange differentiation on the node's panel.
The resulting matrix K_jk acts on row vectors, F_j = e + sum_k K_jk F_k W_k,
and the moment is M1 = -1/(2 pi i) sum_k w_k F_k W_k, q = 2 i [M1]_12.

Three contours are provided:

* the real line (the jump as given, usable for t = 0 and small t),
* the full lens: the real line is opened at both stationary points after
  conjugation by delta, leaving eight straight legs with no jump on R,
* a partial lens without delta: the interval [lam0, lam1] keeps the
  original jump and only the two outer half-lines are opened.

The deformed contours continue the reflection data off the real line
through the scattering entries of the (truncated) potential, which are
entire in lambda.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres
from scipy.special import roots_legendre

from .deltafun import DeltaFunction
from .errors import CollocationError, DomainError
from .phase import PhaseGeometry, geometry, phase_f, phase_theta
from .scattering import ScatteringData

log = logging.getLogger(__name__)

__all__ = [
    "RHSystem",
    "build_jump",
    "cauchy_minus_matrix",
    "real_line_system",
    "build_deformed_jumps",
    "build_partial_lens",
    "solve_rh",
    "reconstruct_q",
    "oracle_q",
    "JUMP_GUARD",
]

JUMP_GUARD = 10.0
RESIDUAL_TOL = 1e-10
DIRECT_MAX = 4000
DROP_TOL = 1e-16
MAX_NODES = 9000


@dataclass
class RHSystem:
    """Discretized contour with jump samples and (after solving) the density.

    Panels are stored contiguously: panel p owns nodes p*order .. (p+1)*order - 1.
    ``weights`` include the orientation (dtau along the contour).
    """

    nodes: np.ndarray
    weights: np.ndarray
    jumps: np.ndarray
    panel_ends: np.ndarray
    order: int
    density: Optional[np.ndarray] = None
    M1: Optional[np.ndarray] = None
    residual: Optional[float] = None
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def det_defect(self) -> float:
        if self.size == 0:
            return 0.0
        return float(np.max(np.abs(np.linalg.det(self.jumps) - 1.0)))


# ---------------------------------------------------------------------------
# Jumps
# ---------------------------------------------------------------------------

def build_jump(sdata: ScatteringData, x: float, t: float, node):
    """J = [[1 - r1 r2, -r2 e^{-2 i theta}], [r1 e^{2 i theta}, 1]] at real nodes.

    Returns a 2x2 array for a scalar node, or (N, 2, 2) for an array.
    Reflection values outside the sampled grid are taken as zero.
    """
    lam = np.atleast_1d(np.asarray(node, dtype=float))
    r1 = np.atleast_1d(sdata.r1_at(lam))
    r2 = np.atleast_1d(sdata.r2_at(lam))
    e = np.exp(2j * phase_theta(x, t, lam, sdata.alpha, sdata.beta))
    J = np.empty(lam.shape + (2, 2), dtype=complex)
    J[..., 0, 0] = 1.0 - r1 * r2
    J[..., 0, 1] = -r2 / e
    J[..., 1, 0] = r1 * e
    J[..., 1, 1] = 1.0
    return J if np.ndim(node) else J[0]


def _upper(c):
    J = np.zeros(np.shape(c) + (2, 2), dtype=complex)
    J[..., 0, 0] = J[..., 1, 1] = 1.0
    J[..., 0, 1] = c
    return J


def _lower(c):
    J = np.zeros(np.shape(c) + (2, 2), dtype=complex)
    J[..., 0, 0] = J[..., 1, 1] = 1.0
    J[..., 1, 0] = c
    return J


# ---------------------------------------------------------------------------
# Panels and the discrete Cauchy operator
# ---------------------------------------------------------------------------

def _reference_rule(order: int):
    x, w = roots_legendre(order)
    bw = np.array([1.0 / np.prod([x[i] - x[k] for k in range(order) if k != i]) for i in range(order)])
    D = np.zeros((order, order))
    for i in range(order):
        for k in range(order):
            if i != k:
                D[i, k] = (bw[k] / bw[i]) / (x[i] - x[k])
        D[i, i] = -np.sum(D[i])
    return x, w, D


def _panels_to_nodes(ends: np.ndarray, order: int):
    x, w, _ = _reference_rule(order)
    a, b = ends[:, 0][:, None], ends[:, 1][:, None]
    nodes = 0.5 * (a + b) + 0.5 * (b - a) * x[None, :]
    weights = 0.5 * (b - a) * w[None, :]
    return nodes.ravel(), weights.ravel()


def cauchy_minus_matrix(system: RHSystem) -> np.ndarray:
    """Matrix K with (C_- f)(s_j) ~ sum_k K_jk f(tau_k) for f smooth on each leg."""
    s = system.nodes
    w = system.weights
    n, order = s.size, system.order
    if n > MAX_NODES:
        raise CollocationError(f"contour needs {n} nodes, above the dense limit {MAX_NODES}")
    K = s[None, :] - s[:, None]
    diag = np.diag_indices(n)
    K[diag] = 1.0
    np.divide(w[None, :], K, out=K)
    K[diag] = 0.0
    rowsum = K.sum(axis=1)
    a = system.panel_ends[:, 0]
    b = system.panel_ends[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log((b[None, :] - s[:, None]) / (a[None, :] - s[:, None]))
    own = np.arange(n) // order
    logs[np.arange(n), own] = logs[np.arange(n), own].real
    K[diag] += logs.sum(axis=1) - rowsum
    _, _, Dref = _reference_rule(order)
    for p in range(system.panel_ends.shape[0]):
        sl = slice(p * order, (p + 1) * order)
        Dp = Dref * (2.0 / (b[p] - a[p]))
        K[sl, sl] += w[sl][:, None] * Dp
    K /= 2j * math.pi
    K[np.diag_indices(n)] -= 0.5
    return K


# ---------------------------------------------------------------------------
# Contours
# ---------------------------------------------------------------------------

def _graded_breaks(length: float, near: float, levels: int, hmax: float) -> np.ndarray:
    """Breakpoints on [0, length]: geometric toward 0 below ``near``, then panels <= hmax."""
    near = min(near, length)
    geo = near * 2.0 ** (-np.arange(levels, 0, -1, dtype=float))
    m = max(1, int(math.ceil((length - near) / hmax)))
    uni = np.linspace(near, length, m + 1)
    return np.concatenate([[0.0], geo, uni])


def _oscillation_breaks(a: float, b: float, omega, kappa: float, hmax: float) -> np.ndarray:
    """Breakpoints on [a, b] with panel length <= min(hmax, kappa / omega(lam))."""
    pts = [a]
    x = a
    while x < b:
        h = min(hmax, kappa / max(float(omega(x)), 1e-12))
        # look ahead so the panel does not cross a faster region
        h = min(h, kappa / max(float(omega(min(x + h, b))), 1e-12))
        # absorb a sliver at the end rather than emitting a degenerate panel
        x = b if x + 1.25 * h >= b else x + h
        pts.append(x)
    return np.array(pts)


def _support(sdata: ScatteringData, tol: float) -> tuple[float, float]:
    g = sdata.lambda_grid
    mag = np.maximum(np.abs(sdata.r1), np.abs(sdata.r2))
    idx = np.nonzero(mag > tol)[0]
    if idx.size == 0:
        return 0.0, 0.0
    return float(g[max(idx[0] - 1, 0)]), float(g[min(idx[-1] + 1, g.size - 1)])


def real_line_system(sdata: ScatteringData, x: float, t: float = 0.0, order: int = 16,
                     kappa: float = 8.0, hmax: float = 1.0, tol: float = 1e-12) -> RHSystem:
    """Real-line contour on the support of the reflection data (|r| > tol).

    Panels are sized so that the local frequency 2 |d theta / d lam| times
    the panel length stays below ``kappa``.
    """
    lo, hi = _support(sdata, tol)
    if hi <= lo:
        return RHSystem(np.zeros(0, complex), np.zeros(0, complex), np.zeros((0, 2, 2), complex),
                        np.zeros((0, 2), complex), order, meta={"kind": "real"})
    al, be = sdata.alpha, sdata.beta

    def omega(lam):
        return 2.0 * abs(x + 4.0 * al * lam * t + 12.0 * be * lam * lam * t)

    br = _oscillation_breaks(lo, hi, omega, kappa, hmax)
    ends = np.stack([br[:-1], br[1:]], axis=1).astype(complex)
    nodes, weights = _panels_to_nodes(ends, order)
    jumps = build_jump(sdata, x, t, nodes.real)
    return RHSystem(nodes, weights, jumps, ends, order, meta={"kind": "real", "x": x, "t": t})


def _leg_ends(anchor: float, direction: complex, breaks: np.ndarray, outward: bool) -> np.ndarray:
    pts = anchor + direction * breaks
    ends = np.stack([pts[:-1], pts[1:]], axis=1)
    if not outward:
        ends = ends[::-1, ::-1]
    return ends


def _truncate_leg(wfun, anchor: float, direction: complex, rmax: float, drop: float) -> float:
    """Smallest radius beyond which |W| < drop on a fine sample of the leg."""
    rho = np.linspace(0.0, rmax, 801)[1:]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        mag = np.max(np.abs(wfun(anchor + direction * rho)), axis=(1, 2))
    # non-finite samples come from overflow of the continued data far out;
    # they compare false below and so count as negligible
    above = np.nonzero(mag >= drop)[0]
    if above.size == 0:
        return float(rho[0])
    k = above[-1]
    if k == rho.size - 1:
        raise DomainError("jump does not decay along the leg within the search radius")
    return float(rho[k + 1])


def _delta_factor(dfun: Optional[DeltaFunction], lam):
    if dfun is None:
        return np.ones_like(lam)
    return dfun.delta_many(lam)


def build_deformed_jumps(sdata: ScatteringData, geo: PhaseGeometry, x: float, t: float,
                         order: int = 10, levels: int = 20, eps_disk: Optional[float] = None,
                         dfun: Optional[DeltaFunction] = None, drop: float = DROP_TOL) -> RHSystem:
    """Full-lens contour: eight legs from the stationary points, no jump on R.

    With M1 = M delta^{-sigma3}, e = exp(2 i t f) and d = 1 - r1 r2:

    * outer legs (from lam1 at +/- pi/4, from lam0 at 3 pi/4, -3 pi/4, oriented outward)
      carry L1 = L(r1 e / delta^2) above and U1 = U(-r2 delta^2 / e) below
      (inverted on the lam0 side);
    * inner legs (from lam0 at +/- pi/4 and from lam1 at 3 pi/4, -3 pi/4 to the
      apexes at (lam0 + lam1)/2 +/- i (lam1 - lam0)/2) carry
      U2 = U(-r2 delta^2 / (d e)) above and L2 = L(r1 e / (d delta^2)) below;
      A (lam0, pi/4) carries U2, B (lam1, 3 pi/4) carries U2^{-1},
      C (lam0, -pi/4) carries L2, D (lam1, -3 pi/4) carries L2^{-1}.

    r1 / d = s21 s22 and r2 / d = s12 s11 are continued through the
    scattering entries of the originating profile.
    """
    if sdata.profile is None:
        raise DomainError("the deformed contour needs the originating profile for continuation")
    if not t > 0:
        raise DomainError("t must be positive")
    lam0, lam1 = geo.lambda0, geo.lambda1
    gap = lam1 - lam0
    if eps_disk is None:
        eps_disk = 0.1 * gap
    if dfun is None:
        dfun = DeltaFunction(sdata, geo)
    al, be, xi = sdata.alpha, sdata.beta, geo.xi
    prof, step = sdata.profile, sdata.step

    from .scattering import scattering_entries

    def ephase(lam):
        return np.exp(2j * t * phase_f(lam, xi, al, be))

    def w_outer_upper(lam):
        s11, s12, s21, s22 = scattering_entries(prof, lam, step)
        dl = _delta_factor(dfun, lam)
        return _lower(s21 / s11 * ephase(lam) / dl ** 2)

    def w_outer_lower(lam):
        s11, s12, s21, s22 = scattering_entries(prof, lam, step)
        dl = _delta_factor(dfun, lam)
        return _upper(-s12 / s22 * dl ** 2 / ephase(lam))

    def w_inner_upper(lam):
        s11, s12, s21, s22 = scattering_entries(prof, lam, step)
        dl = _delta_factor(dfun, lam)
        return _upper(-s12 * s11 * dl ** 2 / ephase(lam))

    def w_inner_lower(lam):
        s11, s12, s21, s22 = scattering_entries(prof, lam, step)
        dl = _delta_factor(dfun, lam)
        return _lower(s21 * s22 * ephase(lam) / dl ** 2)

    def minus_identity(fn):
        return lambda lam: fn(lam) - np.eye(2)

    q = math.pi / 4.0
    inner_len = gap / math.sqrt(2.0)
    legs = [
        # name, anchor, angle, factor, invert, outward, scale point
        ("UR", lam1, q, w_outer_upper, False, True, geo.a1),
        ("LR", lam1, -q, w_outer_lower, False, True, geo.a1),
        ("UL", lam0, 3 * q, w_outer_upper, True, True, geo.a0),
        ("LL", lam0, -3 * q, w_outer_lower, True, True, geo.a0),
        ("A", lam0, q, w_inner_upper, False, True, geo.a0),
        ("B", lam1, 3 * q, w_inner_upper, True, True, geo.a1),
        ("C", lam0, -q, w_inner_lower, False, True, geo.a0),
        ("D", lam1, -3 * q, w_inner_lower, True, True, geo.a1),
    ]
    all_ends, all_nodes, all_weights, all_jumps = [], [], [], []
    leg_info = {}
    for name, anchor, ang, fn, invert, outward, a_loc in legs:
        direction = complex(math.cos(ang), math.sin(ang))
        ell = 1.0 / math.sqrt(8.0 * t * abs(a_loc))
        if name in ("A", "B", "C", "D"):
            length = inner_len
        else:
            length = _truncate_leg(minus_identity(fn), anchor, direction, 4.0 * gap + 40.0 * ell, drop)
        hmax = min(1.5 * ell, eps_disk)
        breaks = _graded_breaks(length, min(eps_disk, 2.0 * ell), levels, hmax)
        ends = _leg_ends(anchor, direction, breaks, outward)
        nodes, weights = _panels_to_nodes(ends, order)
        V = fn(nodes)
        if invert:
            V = np.linalg.inv(V)
        all_ends.append(ends)
        all_nodes.append(nodes)
        all_weights.append(weights)
        all_jumps.append(V)
        leg_info[name] = {"length": float(length), "panels": int(ends.shape[0])}
    system = RHSystem(
        np.concatenate(all_nodes), np.concatenate(all_weights), np.concatenate(all_jumps),
        np.concatenate(all_ends), order,
        meta={"kind": "full_lens", "x": x, "t": t, "legs": leg_info, "eps_disk": eps_disk},
    )
    return system


def build_partial_lens(sdata: ScatteringData, geo: PhaseGeometry, x: float, t: float,
                       order: int = 12, levels: int = 20, eps_disk: Optional[float] = None,
                       kappa: float = 6.0, drop: float = DROP_TOL) -> RHSystem:
    """Contour [lam0, lam1] with the original jump plus four outer legs, no delta.

    Outside [lam0, lam1] the jump factors exactly as U(-r2 / e) L(r1 e); L is
    moved onto the upper legs and U onto the lower legs (inverted on the lam0
    side). The interval keeps its moderately oscillating jump.
    """
    if sdata.profile is None:
        raise DomainError("the deformed contour needs the originating profile for continuation")
    if not t > 0:
        raise DomainError("t must be positive")
    lam0, lam1 = geo.lambda0, geo.lambda1
    gap = lam1 - lam0
    if eps_disk is None:
        eps_disk = 0.1 * gap
    al, be, xi = sdata.alpha, sdata.beta, geo.xi
    prof, step = sdata.profile, sdata.step

    from .scattering import scattering_entries

    def ephase(lam):
        return np.exp(2j * t * phase_f(lam, xi, al, be))

    def w_upper(lam):
        s11, s12, s21, s22 = scattering_entries(prof, lam, step)
        return _lower(s21 / s11 * ephase(lam))

    def w_lower(lam):
        s11, s12, s21, s22 = scattering_entries(prof, lam, step)
        return _upper(-s12 / s22 / ephase(lam))

    q = math.pi / 4.0
    all_ends, all_nodes, all_weights, all_jumps = [], [], [], []
    # interval: graded toward both ends, panels sized by the oscillation
    ell0 = 1.0 / math.sqrt(8.0 * t * abs(geo.a0))
    ell1 = 1.0 / math.sqrt(8.0 * t * abs(geo.a1))
    near0, near1 = min(eps_disk, 2.0 * ell0), min(eps_disk, 2.0 * ell1)

    def omega(lam):
        return 2.0 * t * abs(geo.xi + 4.0 * al * lam + 12.0 * be * lam * lam)

    left = lam0 + near0 * 2.0 ** (-np.arange(levels, -1, -1, dtype=float))
    right = lam1 - near1 * 2.0 ** (-np.arange(0, levels + 1, dtype=float))
    mid = _oscillation_breaks(lam0 + near0, lam1 - near1, omega, kappa, min(1.5 * min(ell0, ell1), eps_disk))
    br = np.concatenate([[lam0], left[:-1], mid, right[1:], [lam1]])
    ends = np.stack([br[:-1], br[1:]], axis=1).astype(complex)
    nodes, weights = _panels_to_nodes(ends, order)
    all_ends.append(ends)
    all_nodes.append(nodes)
    all_weights.append(weights)
    all_jumps.append(build_jump(sdata, x, t, nodes.real))
    for anchor, ang, fn, invert, a_loc in (
        (lam1, q, w_upper, False, geo.a1),
        (lam1, -q, w_lower, False, geo.a1),
        (lam0, 3 * q, w_upper, True, geo.a0),
        (lam0, -3 * q, w_lower, True, geo.a0),
    ):
        direction = complex(math.cos(ang), math.sin(ang))
        ell = 1.0 / math.sqrt(8.0 * t * abs(a_loc))
        length = _truncate_leg(lambda lam, fn=fn: fn(lam) - np.eye(2), anchor, direction,
                               4.0 * gap + 40.0 * ell, drop)
        breaks = _graded_breaks(length, min(eps_disk, 2.0 * ell), levels, min(1.5 * ell, eps_disk))
        e = _leg_ends(anchor, direction, breaks, True)
        n_, w_ = _panels_to_nodes(e, order)
        V = fn(n_)
        if invert:
            V = np.linalg.inv(V)
        all_ends.append(e)
        all_nodes.append(n_)
        all_weights.append(w_)
        all_jumps.append(V)
    return RHSystem(
        np.concatenate(all_nodes), np.concatenate(all_weights), np.concatenate(all_jumps),
        np.concatenate(all_ends), order, meta={"kind": "partial_lens", "x": x, "t": t, "eps_disk": eps_disk},
    )


# ---------------------------------------------------------------------------
# Solve and reconstruct
# ---------------------------------------------------------------------------

def solve_rh(system: RHSystem, rtol: float = 1e-13, residual_tol: float = RESIDUAL_TOL) -> RHSystem:
    """Solve the discrete singular integral equation; fill density, M1 and residual.

    Raises
    ------
    CollocationError
        If a jump sample is farther than JUMP_GUARD from the identity, the
        linear solve fails, or the relative residual exceeds ``residual_tol``.
    """
    n = system.size
    if n == 0:
        return replace(system, density=np.zeros((0, 2, 2), complex), M1=np.zeros((2, 2), complex), residual=0.0)
    W = system.jumps - np.eye(2)[None, :, :]
    wmax = float(np.max(np.abs(W)))
    if not np.isfinite(wmax) or wmax > JUMP_GUARD:
        raise CollocationError(f"jump samples too far from the identity (max |V - I| = {wmax:.3g})")
    if wmax == 0.0:
        dens = np.broadcast_to(np.eye(2), (n, 2, 2)).copy()
        return replace(system, density=dens, M1=np.zeros((2, 2), complex), residual=0.0)
    K = cauchy_minus_matrix(system)
    if not np.all(np.isfinite(K)):
        raise CollocationError("collocation failed: coincident or degenerate nodes")
    # unknown u[(j, c), i] = F^{(i)}_j[c]; (K F W)_j[c] = sum_k K_jk sum_a F_k[a] W_k[a, c]
    rhs = np.zeros((n, 2, 2), dtype=complex)
    rhs[:, 0, 0] = 1.0
    rhs[:, 1, 1] = 1.0
    rhs = rhs.reshape(2 * n, 2)

    def apply(u):
        F = u.reshape(n, 2, -1)                         # (j, a, i)
        FW = np.einsum("kai,kac->kci", F, W)            # (k, c, i)
        KFW = np.tensordot(K, FW, axes=(1, 0))          # (j, c, i)
        return (F - KFW).reshape(2 * n, -1)

    if 2 * n <= DIRECT_MAX:
        A = np.eye(2 * n, dtype=complex) - (K[:, None, :, None] * W.transpose(2, 0, 1)[None, :, :, :]).reshape(2 * n, 2 * n)
        try:
            u = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError as exc:
            raise CollocationError(f"linear solve failed: {exc}") from exc
    else:
        op = LinearOperator((2 * n, 2 * n), matvec=lambda v: apply(v.reshape(-1, 1)).ravel(), dtype=complex)
        cols = []
        for i in range(2):
            sol, info = gmres(op, rhs[:, i], rtol=rtol, atol=0.0, restart=200, maxiter=50)
            if info != 0:
                raise CollocationError(f"GMRES did not converge (info = {info})")
            cols.append(sol)
        u = np.stack(cols, axis=1)
    res = float(np.linalg.norm(apply(u) - rhs) / np.linalg.norm(rhs))
    if not np.isfinite(res) or res > residual_tol:
        cond = float("nan")
        if 2 * n <= DIRECT_MAX:
            try:
                cond = float(np.linalg.cond(A))
            except np.linalg.LinAlgError:
                pass
        raise CollocationError(f"collocation failed: discrete residual {res:.3g}, condition estimate {cond:.3g}")
    F = u.reshape(n, 2, 2).transpose(0, 2, 1)          # (j, i, a): row i of M_-
    FW = F @ W
    M1 = -np.einsum("k,kij->ij", system.weights, FW) / (2j * math.pi)
    return replace(system, density=F, M1=M1, residual=res)


def reconstruct_q(system: RHSystem) -> complex:
    """q = 2 i [M1]_12."""
    if system.M1 is None:
        raise ValueError("system has not been solved")
    return complex(2j * system.M1[0, 1])


def oracle_q(sdata: ScatteringData, x: float, t: float, mode: str = "auto",
             residual_tol: float = RESIDUAL_TOL, **kw) -> complex:
    """q(x, t) from the oracle.

    mode: 'real' (undeformed), 'full_lens', 'partial_lens', or 'auto'
    ('real' for t == 0, 'full_lens' otherwise).
    """
    if mode == "auto":
        mode = "real" if t == 0 else "full_lens"
    if mode == "real":
        system = real_line_system(sdata, x, t, **kw)
    else:
        geo = geometry(sdata.alpha, sdata.beta, x / t)
        builder = build_deformed_jumps if mode == "full_lens" else build_partial_lens
        system = builder(sdata, geo, x, t, **kw)
    return reconstruct_q(solve_rh(system, residual_tol=residual_tol))
