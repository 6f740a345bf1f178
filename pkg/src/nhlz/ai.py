"""Adiabatic-impulse machinery: freeze-out, closed-form densities, series, constants.

Everything here lives in the dimensionless pair (angle, x) with
x = alpha * tau_q / tau_0. The freeze-out distance eps_hat and the auxiliary
P(x) are linked through P = 2 cosh^2(theta_hat) with eps_hat = coth(theta_hat),
which is what makes the closed forms below hyperbolic in (angle +/- theta_hat).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as _sp

__all__ = [
    "AIPrediction",
    "p_of_x",
    "theta_hat_of_x",
    "freeze_out",
    "predict_d_down",
    "predict_d_up",
    "predict_d_broken",
    "series_d",
    "alpha_symmetric",
    "alpha_broken",
    "alpha_d2",
]


@dataclass(frozen=True)
class AIPrediction:
    """Freeze-out solution and (optionally) a predicted density."""

    alpha: float
    x_alpha: float
    t_hat: float
    eps_hat: float
    density: float | None = None
    series: float | None = None


def p_of_x(x: float) -> float:
    """P(x) = 2 + x^2 + x*sqrt(4 + x^2); monotone increasing, P(0) = 2."""
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    return 2.0 + x * x + x * math.sqrt(4.0 + x * x)


def theta_hat_of_x(x: float) -> float:
    """arccoth of the freeze-out distance; 0 at x = 0, grows like sqrt(x)."""
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x == 0.0:
        return 0.0
    # coth(theta) = eps_hat and P = 2 cosh^2(theta) give
    # cosh(2 theta) = P/2 - 1 + P/2 ... use acosh(P/2) on the half angle:
    return math.acosh(math.sqrt(0.5 * p_of_x(x)))


def freeze_out(alpha: float, tau_q: float, tau_0: float = 1.0,
               regime: str = "symmetric") -> AIPrediction:
    """Solve the freeze-out condition tau(t_hat) = alpha * t_hat.

    The closed form is the same in both regimes:
    eps_hat = sqrt((1 + sqrt(1 + 4/x^2)) / 2), t_hat = eps_hat * tau_q.
    """
    if regime not in ("symmetric", "broken"):
        raise ValueError(f"regime must be 'symmetric' or 'broken', got {regime!r}")
    if not (alpha > 0 and tau_q > 0 and tau_0 > 0):
        raise ValueError("alpha, tau_q, tau_0 must all be > 0")
    x = alpha * tau_q / tau_0
    eps_hat = math.sqrt(0.5 * (1.0 + math.sqrt(1.0 + 4.0 / (x * x))))
    return AIPrediction(alpha=alpha, x_alpha=x, t_hat=eps_hat * tau_q, eps_hat=eps_hat)


def predict_d_down(theta0: float, x: float) -> float:
    """Density after a sweep entering the gap closing, final-state ground weight.

    Equals 1/2 - 1/(2 cosh(theta0 + theta_hat(x))).
    """
    p = p_of_x(x)
    return 0.5 + 1.0 / (
        -math.cosh(theta0) * math.sqrt(2.0 * p)
        - 2.0 * math.sinh(theta0) * math.sqrt(0.5 * p - 1.0)
    )


def predict_d_up(theta0: float, x: float) -> float:
    """Excited-state weight for a sweep escaping the gap closing.

    Equals 1/2 - 1/(2 cosh(theta0 - theta_hat(x))); the sign of the
    reciprocal term is fixed by the series (zeroth term
    sinh^2(theta0/2) sech(theta0), then -1/2 tanh sech sqrt(x)).
    """
    p = p_of_x(x)
    return 0.5 - 1.0 / (
        math.cosh(theta0) * math.sqrt(2.0 * p)
        - 2.0 * math.sinh(theta0) * math.sqrt(0.5 * p - 1.0)
    )


def predict_d_broken(alpha0: float, x: float, from_side: str = "minus_inf") -> float:
    """Relative occupation for the broken-phase sweeps.

    from_side = "minus_inf": 1/2 + (sinh a0 / 2) / (sqrt(P/2-1) - sqrt(P/2) cosh a0),
    whose series carries -sqrt(x); from_side = "near_ep" flips the sign of the
    sqrt(P/2-1) term, giving the +sqrt(x) branch.
    """
    if alpha0 < 0:
        raise ValueError(f"alpha0 must be >= 0, got {alpha0}")
    p = p_of_x(x)
    root = math.sqrt(0.5 * p - 1.0)
    if from_side == "minus_inf":
        denom = root - math.sqrt(0.5 * p) * math.cosh(alpha0)
    elif from_side == "near_ep":
        denom = -root - math.sqrt(0.5 * p) * math.cosh(alpha0)
    else:
        raise ValueError(f"from_side must be 'minus_inf' or 'near_ep', got {from_side!r}")
    return 0.5 + 0.5 * math.sinh(alpha0) / denom


def series_d(kind: str, angle: float, x: float, order: int = 2) -> float:
    """Small-x truncations of the closed forms.

    kind "down":        T0 + T1 sqrt(x) + T2 x      (order 0, 1, 2)
    kind "up":          T0 - T1 sqrt(x)             (order 0, 1)
    kind "broken_plus": L0 + B1 sqrt(x)             (order 0, 1)
    kind "broken_minus": L0 - B1 sqrt(x)
    with T0 = sinh^2(angle/2) sech(angle), T1 = tanh sech / 2,
    T2 = -(cosh(2 angle) - 3) sech^3 / 8, L0 = 1/(e^(2 angle) + 1),
    B1 = tanh(angle) sech(angle) / 2.
    """
    if order < 0 or order > 2:
        raise ValueError(f"order must be 0, 1, or 2, got {order}")
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    sq = math.sqrt(x)
    if kind in ("down", "up"):
        sech = 1.0 / math.cosh(angle)
        t0 = math.sinh(0.5 * angle) ** 2 * sech
        t1 = 0.5 * math.tanh(angle) * sech
        val = t0
        if order >= 1:
            val += t1 * sq if kind == "down" else -t1 * sq
        if order >= 2 and kind == "down":
            val += -0.125 * (math.cosh(2.0 * angle) - 3.0) * sech**3 * x
        return val
    if kind in ("broken_plus", "broken_minus"):
        l0 = 1.0 / (math.exp(2.0 * angle) + 1.0)
        b1 = 0.5 * math.tanh(angle) / math.cosh(angle)
        val = l0
        if order >= 1:
            val += b1 * sq if kind == "broken_plus" else -b1 * sq
        return val
    raise ValueError(f"unknown series kind {kind!r}")


def alpha_symmetric() -> float:
    """Closed-form freeze-out constant for the PT-symmetric sweeps.

    pi (1 + e^pi) / (8 (e^(pi/2) - 1)^4) * (1 - 2 S(coth(pi/2)/sqrt(pi)))^2
    with S the Fresnel sine integral.
    """
    s_val, _ = _sp.fresnel(1.0 / (math.tanh(math.pi / 2.0) * math.sqrt(math.pi)))
    front = math.pi * (1.0 + math.exp(math.pi)) / (8.0 * (math.exp(math.pi / 2.0) - 1.0) ** 4)
    return front * (1.0 - 2.0 * float(s_val)) ** 2


def alpha_broken() -> float:
    """Closed-form freeze-out constant for the broken-phase sweeps.

    (15 pi / 7442) * (11 + sqrt(11)) * sqrt(6 + sqrt(11))
    * sqrt(22 (47 - 12 sqrt(11)))
    * (erf(sqrt(3/2)) - erf(3 sqrt(2)/5)) * (erfi(sqrt(3/2)) - erfi(3 sqrt(2)/5)).
    Grouping: one flat product of the listed factors.
    """
    r11 = math.sqrt(11.0)
    erf_term = _sp.erf(math.sqrt(1.5)) - _sp.erf(3.0 * math.sqrt(2.0) / 5.0)
    erfi_term = _sp.erfi(math.sqrt(1.5)) - _sp.erfi(3.0 * math.sqrt(2.0) / 5.0)
    return (
        (15.0 * math.pi / 7442.0)
        * (11.0 + r11)
        * math.sqrt(6.0 + r11)
        * math.sqrt(22.0 * (47.0 - 12.0 * r11))
        * float(erf_term)
        * float(erfi_term)
    )


def alpha_d2() -> float:
    """Fresnel-form constant for the fast crossing density (quadratic scenario).

    sqrt(11) pi / 1728 * 72 (C(w) - 1) C(w) - 28/1728 * ((S(w) - 1) S(w) + 11)
    at w = 6/(5 sqrt(pi)). Grouping: two bracketed terms, as listed.
    """
    w = 6.0 / (5.0 * math.sqrt(math.pi))
    s_val, c_val = (float(v) for v in _sp.fresnel(w))
    first = math.sqrt(11.0) * math.pi / 1728.0 * (72.0 * (c_val - 1.0) * c_val)
    second = 28.0 / 1728.0 * ((s_val - 1.0) * s_val + 11.0)
    return first - second
