"""
Explicit long-time leading order of q(x, t) in the two-point sector.

Near each stationary point the rescaled problem is solved by parabolic
cylinder functions. With B0 = -32 lam0^2 t a0 > 0, B1 = 32 lam1^2 t a1 > 0,
a_j = alpha + 6 beta lam_j and the time-scaling factors

    delta0_{lam0} = B0^{ i vartheta0 / 2} exp(2 i lam0^2 t (4 beta lam0 + alpha) + chi0(lam0)),
    delta0_{lam1} = B1^{-i vartheta1 / 2} exp(2 i lam1^2 t (4 beta lam1 + alpha) + chi1(lam1)),

the two local contributions to the first moment are

    [M1]_12 = delta0_{lam0}^2 / sqrt(8 t |a0|) * m0 + delta0_{lam1}^2 / sqrt(8 t a1) * m1,

where m0, m1 are the 12-entries of the model-problem moments, and
q ~ 2 i [M1]_12 with remainder O(t^{-1/2 - max |Im vartheta_j|}).

All radicands in the assembly are positive. The one-line closed form
(``theorem_q``) contains sqrt(alpha + 6 beta lam0) of a negative number; it
reproduces the assembly only with the branch e^{i pi/2} sqrt|a0|, which is
the default and is verified in the test suite.

Powers (-1)^p are taken as exp(i pi p) throughout.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .deltafun import DeltaData, DeltaFunction
from .errors import DomainError, SectorError, WindingError
from .phase import PhaseGeometry, geometry
from .scattering import ScatteringData
from .specfun import reciprocal_cgamma

__all__ = [
    "AsymptoticTerms",
    "T_MIN",
    "delta0_factors",
    "model_m1",
    "model_m1_21",
    "error_exponent",
    "asymptotic_terms",
    "leading_q",
    "theorem_q",
    "scaled_delta1",
    "scaled_jump_limit_check",
    "ray_delta_function",
]

T_MIN = 10.0
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_PI = math.sqrt(math.pi)


def _iexp(p: complex) -> complex:
    """(-1)^p with (-1) = e^{i pi}."""
    return cmath.exp(1j * math.pi * p)


@dataclass(frozen=True)
class AsymptoticTerms:
    """Leading-order data at one (x, t)."""

    x: float
    t: float
    geometry: PhaseGeometry
    delta_data: DeltaData
    delta0_l0: complex
    delta0_l1: complex
    m1inf_12_l0: complex
    m1inf_12_l1: complex
    term0: complex
    term1: complex
    q_leading: complex
    error_exponent: float
    corrected: bool = False


def error_exponent(vtheta0: complex, vtheta1: complex) -> float:
    """1/2 + max(|Im vartheta0|, |Im vartheta1|)."""
    return 0.5 + max(abs(complex(vtheta0).imag), abs(complex(vtheta1).imag))


def _bases(geo: PhaseGeometry, t: float, corrected: bool) -> tuple[float, float]:
    lam0, lam1 = geo.lambda0, geo.lambda1
    if corrected:
        # local expansion of ((lam - lam1)/(lam - lam0)) uses the true gap lam1 - lam0;
        # 2|lam_j| equals that gap only when alpha = 0
        gap2 = (lam1 - lam0) ** 2
        b0 = -8.0 * t * geo.a0 * gap2
        b1 = 8.0 * t * geo.a1 * gap2
    else:
        b0 = -32.0 * lam0 * lam0 * t * geo.a0
        b1 = 32.0 * lam1 * lam1 * t * geo.a1
    return b0, b1


def delta0_factors(ddata: DeltaData, geo: PhaseGeometry, t: float,
                   corrected: bool = False) -> tuple[complex, complex]:
    """Time-scaling factors (delta0_{lam0}, delta0_{lam1}).

    Parameters
    ----------
    ddata : DeltaData
        vartheta and chi at the stationary points.
    geo : PhaseGeometry
    t : float
        Time, > 0.
    corrected : bool
        Use the base 8 t |a_j| (lam1 - lam0)^2 instead of 32 lam_j^2 t |a_j|.
        The two coincide for alpha = 0.

    Raises
    ------
    SectorError
        If either base is not positive.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    b0, b1 = _bases(geo, t, corrected)
    if not (b0 > 0 and b1 > 0):
        raise SectorError(f"scaling bases must be positive (B0 = {b0:g}, B1 = {b1:g})")
    lam0, lam1 = geo.lambda0, geo.lambda1
    al, be = geo.alpha, geo.beta
    ph0 = 2j * lam0 * lam0 * t * (4.0 * be * lam0 + al)
    ph1 = 2j * lam1 * lam1 * t * (4.0 * be * lam1 + al)
    d0 = cmath.exp(0.5j * ddata.vartheta0 * math.log(b0) + ph0 + ddata.chi0_at_l0)
    d1 = cmath.exp(-0.5j * ddata.vartheta1 * math.log(b1) + ph1 + ddata.chi1_at_l1)
    return d0, d1


def _check_model_args(r_at: complex, vartheta: complex) -> bool:
    """True if the moment vanishes (vartheta = 0); raise on inconsistent data."""
    if vartheta == 0:
        return True
    if r_at == 0:
        raise DomainError("reflection value is zero but vartheta is not: inconsistent data")
    return False


def model_m1(r1_at: complex, r2_at: complex, vartheta: complex, which: int) -> complex:
    """12-entry of the first moment of the model problem at lam0 (which=0) or lam1 (which=1).

    lam0: sqrt(2 pi) i (-1)^{i vt - 1/2} e^{-3 pi i/4 + pi vt/2} / (r1 Gamma(i vt))
    lam1: sqrt(2 pi) i e^{-pi vt/2} e^{-3 pi i/4} / (r1 Gamma(-i vt))
    """
    r1_at, vartheta = complex(r1_at), complex(vartheta)
    if _check_model_args(r1_at, vartheta):
        return 0j
    if which == 0:
        num = _SQRT_2PI * 1j * _iexp(1j * vartheta - 0.5) * cmath.exp(-0.75j * math.pi + 0.5 * math.pi * vartheta)
        return num * reciprocal_cgamma(1j * vartheta) / r1_at
    if which == 1:
        num = _SQRT_2PI * 1j * cmath.exp(-0.5 * math.pi * vartheta - 0.75j * math.pi)
        return num * reciprocal_cgamma(-1j * vartheta) / r1_at
    raise ValueError("which must be 0 or 1")


def model_m1_21(r1_at: complex, r2_at: complex, vartheta: complex, which: int) -> complex:
    """21-entry of the first moment of the model problem.

    lam0: sqrt(2 pi) i (-1)^{-i vt - 1/2} e^{-pi i/4 + pi vt/2} / (r2 Gamma(-i vt))
    lam1: sqrt(2 pi) i e^{-pi vt/2} e^{-pi i/4} / (r2 Gamma(i vt))
    """
    r2_at, vartheta = complex(r2_at), complex(vartheta)
    if _check_model_args(r2_at, vartheta):
        return 0j
    if which == 0:
        num = _SQRT_2PI * 1j * _iexp(-1j * vartheta - 0.5) * cmath.exp(-0.25j * math.pi + 0.5 * math.pi * vartheta)
        return num * reciprocal_cgamma(-1j * vartheta) / r2_at
    if which == 1:
        num = _SQRT_2PI * 1j * cmath.exp(-0.5 * math.pi * vartheta - 0.25j * math.pi)
        return num * reciprocal_cgamma(1j * vartheta) / r2_at
    raise ValueError("which must be 0 or 1")


def _ray_delta(sdata: ScatteringData, xi: float, dfun: Optional[DeltaFunction]) -> DeltaFunction:
    if dfun is not None:
        if abs(dfun.geo.xi - xi) > 1e-14 * max(1.0, abs(xi)):
            raise ValueError("supplied delta function belongs to another ray")
        return dfun
    if not sdata.beta > 0:
        raise DomainError("the two-point analysis is implemented for beta > 0")
    return DeltaFunction(sdata, geometry(sdata.alpha, sdata.beta, xi))


def asymptotic_terms(x: float, t: float, sdata: ScatteringData, t_min: float = T_MIN,
                     corrected: bool = False, dfun: Optional[DeltaFunction] = None) -> AsymptoticTerms:
    """All leading-order ingredients at (x, t).

    Parameters
    ----------
    x, t : float
        Evaluation point; t >= t_min.
    sdata : ScatteringData
    t_min : float
        Smallest t accepted (the formula is asymptotic). Pass 0 to extrapolate.
    corrected : bool
        See :func:`delta0_factors`.
    dfun : DeltaFunction, optional
        Precomputed delta factor for the ray x / t; reused across t.

    Raises
    ------
    SectorError
        Outside the two-point sector, or for a vanishing stationary point.
    WindingError
        If |Im vartheta| >= 1/2 at either stationary point.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    if t < t_min:
        raise DomainError(f"t = {t:g} is below t_min = {t_min:g}; pass a smaller t_min to extrapolate")
    xi = x / t
    d = _ray_delta(sdata, xi, dfun)
    geo = d.geo
    check = d.winding()
    if not check:
        raise WindingError(check.message)
    if geo.lambda0 == 0.0 or geo.lambda1 == 0.0:
        raise SectorError("a stationary point at the origin degenerates the scaling")
    dd = d.data()
    d0, d1 = delta0_factors(dd, geo, t, corrected)
    r1_0 = complex(sdata.r1_at(geo.lambda0))
    r2_0 = complex(sdata.r2_at(geo.lambda0))
    r1_1 = complex(sdata.r1_at(geo.lambda1))
    r2_1 = complex(sdata.r2_at(geo.lambda1))
    m0 = model_m1(r1_0, r2_0, dd.vartheta0, 0)
    m1 = model_m1(r1_1, r2_1, dd.vartheta1, 1)
    term0 = 2j * d0 * d0 / math.sqrt(-8.0 * t * geo.a0) * m0
    term1 = 2j * d1 * d1 / math.sqrt(8.0 * t * geo.a1) * m1
    return AsymptoticTerms(
        float(x), float(t), geo, dd, d0, d1, m0, m1, term0, term1, term0 + term1,
        error_exponent(dd.vartheta0, dd.vartheta1), corrected,
    )


def leading_q(x: float, t: float, sdata: ScatteringData, t_min: float = T_MIN,
              corrected: bool = False, dfun: Optional[DeltaFunction] = None) -> tuple[complex, float]:
    """Leading-order q(x, t) and the exponent of its remainder.

    Returns
    -------
    (q_leading, error_exponent)
    """
    terms = asymptotic_terms(x, t, sdata, t_min, corrected, dfun)
    return terms.q_leading, terms.error_exponent


def theorem_q(x: float, t: float, sdata: ScatteringData, sqrt_branch: int = +1,
              t_min: float = T_MIN, dfun: Optional[DeltaFunction] = None) -> complex:
    """Closed one-line formula for the leading order.

    sqrt(alpha + 6 beta lam0) is taken as exp(sqrt_branch * i pi / 2) sqrt|a0|
    and ln(32 lam0^2 (alpha + 6 beta lam0)) as the principal logarithm.
    """
    if sqrt_branch not in (1, -1):
        raise ValueError("sqrt_branch must be +1 or -1")
    if t < t_min:
        raise DomainError(f"t = {t:g} is below t_min = {t_min:g}")
    d = _ray_delta(sdata, x / t, dfun)
    geo = d.geo
    check = d.winding()
    if not check:
        raise WindingError(check.message)
    dd = d.data()
    al, be = geo.alpha, geo.beta
    out = 0j
    for j, (lam, a, vt, chi_j) in enumerate(((geo.lambda0, geo.a0, dd.vartheta0, dd.chi0_at_l0),
                                             (geo.lambda1, geo.a1, dd.vartheta1, dd.chi1_at_l1))):
        r1 = complex(sdata.r1_at(lam))
        if vt == 0:
            continue
        if r1 == 0:
            raise DomainError("reflection value is zero but vartheta is not: inconsistent data")
        lg = cmath.log(32.0 * lam * lam * a)
        ph = 4j * lam * lam * t * (4.0 * be * lam + al) + 2.0 * chi_j
        if j == 0:
            root = cmath.exp(sqrt_branch * 0.5j * math.pi) * math.sqrt(abs(a)) if a < 0 else math.sqrt(a)
            expo = (ph + 0.5 * math.pi * vt + 0.25j * math.pi + 1j * vt.real * math.log(t) + 1j * vt * lg)
            tpow = t ** (-0.5 - vt.imag)
            out += _SQRT_PI * tpow * cmath.exp(expo) * reciprocal_cgamma(1j * vt) / (root * r1)
        else:
            root = math.sqrt(a) if a > 0 else cmath.exp(sqrt_branch * 0.5j * math.pi) * math.sqrt(abs(a))
            expo = (ph - 0.5 * math.pi * vt + 0.25j * math.pi - 1j * vt.real * math.log(t) - 1j * vt * lg)
            tpow = t ** (-0.5 + vt.imag)
            out += _SQRT_PI * tpow * cmath.exp(expo) * reciprocal_cgamma(-1j * vt) / (root * r1)
    return out


# ---------------------------------------------------------------------------
# Scaled delta factor and its large-t limit
# ---------------------------------------------------------------------------

def scaled_delta1(dfun: DeltaFunction, t: float, lambda_tilde: complex, which: int = 0,
                  side: Optional[str] = None) -> complex:
    """Remainder factor delta1 of exp(-i t f) delta after the scaling lam -> lambda_tilde.

    lam0: lambda_tilde = sqrt(8 t |a0|) (lam - lam0);
    lam1: lambda_tilde = sqrt(8 t a1) (lam - lam1).
    The factor keeps the finite ratio (2 lam_j / (lam - lam_other))^{-/+ i vartheta_j},
    the exact cubic part of the phase and chi_j(lam) - chi_j(lam_j).
    """
    geo = dfun.geo
    lt = complex(lambda_tilde)
    if lt == 0:
        raise DomainError("lambda_tilde = 0 is the branch point of lambda_tilde^{i vartheta}")
    be = geo.beta
    if which == 0:
        scale = math.sqrt(-8.0 * t * geo.a0)
        lam = geo.lambda0 + lt / scale
        vt = dfun.vartheta0
        ratio = 2.0 * geo.lambda0 / (lam - geo.lambda1)
        # -i t (f(lam) - f(lam0)) = i lt^2 / 4 - i beta lt^3 / (4 sqrt(2t) |a0|^{3/2})
        quad = 0.25j * lt * lt
        cubic = -1j * be * lt ** 3 / (4.0 * math.sqrt(2.0 * t) * abs(geo.a0) ** 1.5)
        powers = -1j * vt * (cmath.log(lt) + cmath.log(ratio))
        ref = dfun.lam0
    elif which == 1:
        scale = math.sqrt(8.0 * t * geo.a1)
        lam = geo.lambda1 + lt / scale
        vt = dfun.vartheta1
        ratio = 2.0 * geo.lambda1 / (lam - geo.lambda0)
        quad = -0.25j * lt * lt
        cubic = -1j * be * lt ** 3 / (4.0 * math.sqrt(2.0 * t) * geo.a1 ** 1.5)
        powers = 1j * vt * (cmath.log(lt) + cmath.log(ratio))
        ref = dfun.lam1
    else:
        raise ValueError("which must be 0 or 1")
    dchi = complex(dfun.chi(lam, which, side)) - complex(dfun.chi(ref, which))
    return cmath.exp(powers + quad + cubic + dchi)


def scaled_jump_limit_check(sdata: ScatteringData, geo: PhaseGeometry, t: float,
                            lambda_tilde: complex, which: int = 0,
                            dfun: Optional[DeltaFunction] = None, side: Optional[str] = None) -> float:
    """|delta1(t, lambda_tilde) - lambda_tilde^{-/+ i vartheta} e^{+/- i lambda_tilde^2 / 4}|.

    Quantifies how fast the scaled factor approaches its large-t limit. The
    finite ratio (2 lam_j / (lam_j - lam_other))^{-/+ i vartheta} is kept in
    delta1, so for alpha != 0 the deviation tends to a nonzero constant.
    """
    d = dfun if dfun is not None else DeltaFunction(sdata, geo)
    lt = complex(lambda_tilde)
    val = scaled_delta1(d, t, lt, which, side)
    if which == 0:
        lim = cmath.exp(-1j * d.vartheta0 * cmath.log(lt) + 0.25j * lt * lt)
    else:
        lim = cmath.exp(1j * d.vartheta1 * cmath.log(lt) - 0.25j * lt * lt)
    return float(abs(val - lim))


def ray_delta_function(sdata: ScatteringData, xi: float) -> DeltaFunction:
    """Delta factor for the ray x / t = xi (to share across t values)."""
    return _ray_delta(sdata, xi, None)

