"""Special functions for the exact quench solutions.

Fresnel integrals and the error functions delegate to scipy.special (their
defining-integral quadrature oracles live in the test suite). The Weber
parabolic cylinder function D_nu(z) for complex order and argument is
implemented here: a power series about the origin, the compound asymptotic
expansion with its Stokes-sector connection term, and a Richardson-
extrapolated RK4 march of Weber's equation along the ray from a trusted
anchor for the band in between.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy import special as _sp

__all__ = [
    "SpecFunResult",
    "AccuracyLossError",
    "fresnel_s",
    "fresnel_c",
    "erf_complex",
    "erfi_complex",
    "pcf_d",
]

_SERIES_MAX_ABS = 8.0
_ASYMPTOTIC_MIN_ABS = 30.0
_ACCURACY_LOSS_LIMIT = 1e-6
_EPS = 2.2e-16


@dataclass(frozen=True)
class SpecFunResult:
    """Value with an honest absolute-error estimate and the method used."""

    value: complex
    est_abs_error: float
    method: str  # "series" | "asymptotic" | "ode_fallback"


class AccuracyLossError(ArithmeticError):
    """Estimated error exceeded the acceptable limit; carries the result."""

    def __init__(self, message: str, result: SpecFunResult):
        super().__init__(message)
        self.result = result


def fresnel_s(z: float) -> float:
    """Fresnel sine integral, S(z) = int_0^z sin(pi t^2 / 2) dt."""
    s, _ = _sp.fresnel(z)
    return float(s)


def fresnel_c(z: float) -> float:
    """Fresnel cosine integral, C(z) = int_0^z cos(pi t^2 / 2) dt."""
    _, c = _sp.fresnel(z)
    return float(c)


def erf_complex(z: complex) -> complex:
    """Entire error function, (2/sqrt(pi)) int_0^z exp(-t^2) dt."""
    return complex(_sp.erf(complex(z)))


def erfi_complex(z: complex) -> complex:
    """Imaginary error function; satisfies erfi(z) = -i erf(i z)."""
    return complex(_sp.erfi(complex(z)))


def _d_at_zero(nu: complex) -> tuple[complex, complex]:
    """(D_nu(0), D_nu'(0)) via reciprocal gammas (poles give exact zeros)."""
    root_pi = math.sqrt(math.pi)
    w0 = root_pi * 2.0 ** (0.5 * nu) * complex(_sp.rgamma(0.5 * (1.0 - nu)))
    w1 = -root_pi * 2.0 ** (0.5 * (nu + 1.0)) * complex(_sp.rgamma(-0.5 * nu))
    return w0, w1


def _series(nu: complex, z: complex) -> tuple[complex, complex, float]:
    """Power-series value, derivative, and error estimate at moderate |z|.

    Taylor coefficients obey k (k-1) w_k = -(nu + 1/2) w_{k-2} + w_{k-4} / 4,
    seeded by the exact values of D and D' at the origin. The estimate adds
    the last included term to a cancellation term proportional to the largest
    partial sum.
    """
    w0, w1 = _d_at_zero(nu)
    if z == 0:
        return w0, w1, 4.0 * _EPS * (abs(w0) + abs(w1))

    c = -(nu + 0.5)
    km4 = km3 = complex(0.0)
    km2, km1 = w0, w1
    val = w0 + w1 * z
    dval = w1 + 0j
    zk = z
    max_mag = max(abs(val), abs(w0))
    k_min = abs(z) ** 2 / 2.0 + 12.0
    last = abs(w1 * z)
    k = 2
    while k < 2500:
        wk = (c * km2 + 0.25 * km4) / (k * (k - 1.0))
        zk = zk * z
        term = wk * zk
        val += term
        dval += k * wk * zk / z
        mag = abs(val)
        if mag > max_mag:
            max_mag = mag
        t_abs = abs(term)
        if k > k_min and t_abs + last < 1e-18 * (mag + 1e-300):
            last = t_abs
            break
        last = t_abs
        km4, km3, km2, km1 = km3, km2, km1, wk
        k += 1
    est = last + 8.0 * _EPS * max_mag
    return val, dval, est


def _asymptotic_sums(nu: complex, z: complex, max_terms: int = 120):
    """Divergent sums S1, S2 truncated at their smallest terms."""
    inv2z2 = 1.0 / (2.0 * z * z)
    s1 = complex(1.0)
    term = complex(1.0)
    best1 = math.inf
    for s in range(max_terms):
        term = term * (-(-nu + 2 * s) * (-nu + 2 * s + 1)) * inv2z2 / (s + 1.0)
        if abs(term) >= best1:
            break
        s1 += term
        best1 = abs(term)
    s2 = complex(1.0)
    term = complex(1.0)
    best2 = math.inf
    for s in range(max_terms):
        term = term * ((nu + 1 + 2 * s) * (nu + 2 + 2 * s)) * inv2z2 / (s + 1.0)
        if abs(term) >= best2:
            break
        s2 += term
        best2 = abs(term)
    return s1, best1, s2, best2


def _asymptotic(nu: complex, z: complex) -> tuple[complex, float]:
    """Compound large-|z| expansion with the sector-dependent second term."""
    arg = cmath.phase(z)
    s1, tail1, s2, tail2 = _asymptotic_sums(nu, z)
    p1 = cmath.exp(-0.25 * z * z + nu * cmath.log(z))
    val = p1 * s1
    est = abs(p1) * tail1
    if abs(arg) > 0.25 * math.pi:
        sigma = 1.0 if arg > 0 else -1.0
        coeff = math.sqrt(2.0 * math.pi) * complex(_sp.rgamma(-nu)) * cmath.exp(sigma * 1j * math.pi * nu)
        p2 = cmath.exp(0.25 * z * z - (nu + 1.0) * cmath.log(z))
        val += coeff * p2 * s2
        est += abs(coeff * p2) * tail2
    est += 8.0 * _EPS * abs(val)
    return val, est


@njit(cache=True)
def _march_weber(nu: complex, zhat: complex, s0: float, s1: float,
                 w0: complex, u0: complex, n_steps: int):
    """RK4 march of W'' = zhat^2 ((zhat s)^2/4 - nu - 1/2) W from s0 to s1."""
    h = (s1 - s0) / n_steps
    a = zhat * zhat
    b = a * a * 0.25
    c0 = -a * (nu + 0.5)
    w = w0
    u = u0
    s = s0
    for _ in range(n_steps):
        # coefficient c(s) = b s^2 + c0
        k1w = u
        k1u = (b * s * s + c0) * w
        sh = s + 0.5 * h
        k2w = u + 0.5 * h * k1u
        k2u = (b * sh * sh + c0) * (w + 0.5 * h * k1w)
        k3w = u + 0.5 * h * k2u
        k3u = (b * sh * sh + c0) * (w + 0.5 * h * k2w)
        se = s + h
        k4w = u + h * k3u
        k4u = (b * se * se + c0) * (w + h * k3w)
        w = w + (h / 6.0) * (k1w + 2.0 * (k2w + k3w) + k4w)
        u = u + (h / 6.0) * (k1u + 2.0 * (k2u + k3u) + k4u)
        s = se
    return w, u


def _ode_fallback(nu: complex, z: complex) -> tuple[complex, float]:
    """March Weber's equation along the ray through z from a trusted anchor.

    Rays on which D_nu is recessive outward (Re z^2 > 0) are marched inward
    from an asymptotic anchor so the dominant co-solution cannot contaminate
    the result; all other rays start from the series at moderate |z|.
    """
    az = abs(z)
    zhat = z / az
    cos2t = math.cos(2.0 * cmath.phase(z))

    if cos2t >= 0.0:
        r_anchor = max(_ASYMPTOTIC_MIN_ABS, az) * 1.0
        va, ea = _asymptotic(nu, zhat * r_anchor)
        vb, eb = _asymptotic(nu + 1.0, zhat * r_anchor)
        w0 = va
        dw0 = 0.5 * (zhat * r_anchor) * va - vb  # dD/dz at the anchor
        anchor_est = ea + eb
        s_from, s_to = r_anchor, az
    else:
        r_anchor = min(_SERIES_MAX_ABS - 0.5, az)
        w0, dw0, anchor_est = _series(nu, zhat * r_anchor)
        s_from, s_to = r_anchor, az

    if s_from == s_to:
        return w0, anchor_est

    u0 = zhat * dw0  # d/ds along the ray
    span = abs(s_to - s_from)
    omega = math.sqrt(max(abs(s_from), abs(s_to)) ** 2 / 4.0 + abs(nu) + 0.5)
    n = max(64, int(span * omega * 12.0), int(span * 2000.0))
    w_h, _ = _march_weber(nu, zhat, s_from, s_to, w0, u0, n)
    w_h2, _ = _march_weber(nu, zhat, s_from, s_to, w0, u0, 2 * n)
    value = w_h2 + (w_h2 - w_h) / 15.0
    est = abs(w_h2 - w_h) + anchor_est
    return value, est


def pcf_d(nu: complex, z: complex, z_max: float = 1e3) -> SpecFunResult:
    """Weber parabolic cylinder function D_nu(z), complex order and argument.

    Method selection: power series for |z| <= 8, the asymptotic expansion for
    |z| >= 30 when its truncation error is acceptable, and the ODE march
    otherwise.

    Raises
    ------
    AccuracyLossError
        If the estimated absolute error exceeds 1e-6. The partial result is
        attached to the exception.
    """
    nu = complex(nu)
    z = complex(z)
    if not (cmath.isfinite(nu) and cmath.isfinite(z)):
        raise ValueError("nu and z must be finite")
    az = abs(z)
    if az > z_max:
        raise ValueError(f"|z| = {az:g} exceeds z_max = {z_max:g}")

    if az <= _SERIES_MAX_ABS:
        val, _, est = _series(nu, z)
        result = SpecFunResult(val, est, "series")
    elif az >= _ASYMPTOTIC_MIN_ABS:
        val, est = _asymptotic(nu, z)
        if est <= 1e-9 * max(1.0, abs(val)):
            result = SpecFunResult(val, est, "asymptotic")
        else:
            val, est = _ode_fallback(nu, z)
            result = SpecFunResult(val, est, "ode_fallback")
    else:
        val, est = _ode_fallback(nu, z)
        result = SpecFunResult(val, est, "ode_fallback")

    if result.est_abs_error > _ACCURACY_LOSS_LIMIT:
        raise AccuracyLossError(
            f"D_nu evaluation at nu={nu}, z={z} lost accuracy "
            f"(est {result.est_abs_error:.3g})",
            result,
        )
    return result
