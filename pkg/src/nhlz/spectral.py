"""Instantaneous biorthogonal eigensystem, PT-phase classification, relaxation time.

Eigenvalues come in a traceless pair E = +/- gap/2 with
gap^2 = (p gamma)^2 + nu^2 (1 - delta), which is real for every parity tag.
The principal square root puts E_plus on the positive real axis in the
PT-symmetric phase and on the positive imaginary axis (least dissipative) in
the broken phase.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, gamma_of_t

__all__ = [
    "EP_TOL",
    "PTPhase",
    "SpectralData",
    "EPProximityError",
    "DivergesAtEPError",
    "classify_phase",
    "eigensystem",
    "relaxation_time",
]

# EP detection collar, in units of nu. Well above double-precision
# eigen-residuals, well below any physical grid spacing used here.
EP_TOL = 1e-9


class EPProximityError(ArithmeticError):
    """Raised when the eigensystem is requested inside the EP collar."""


class DivergesAtEPError(ArithmeticError):
    """Raised when the relaxation time is requested at its pole."""


class PTPhase(enum.Enum):
    SYMMETRIC = "symmetric"
    BROKEN = "broken"
    EXCEPTIONAL_POINT = "exceptional_point"


@dataclass(frozen=True)
class SpectralData:
    """Eigensystem of H(t) at one instant.

    Left rows are biorthonormal to the right columns, <i_L | j_R> = delta_ij,
    with the residual scale freedom fixed by ||left|| = ||right|| per pair
    (and a deterministic phase convention on the right vectors).
    """

    e_plus: complex
    e_minus: complex
    right_up: np.ndarray
    right_down: np.ndarray
    left_up: np.ndarray
    left_down: np.ndarray
    gap: complex
    epsilon: float
    theta: complex
    phase: PTPhase

    def left_of(self, target: str) -> np.ndarray:
        if target == "up":
            return self.left_up
        if target == "down":
            return self.left_down
        raise ValueError(f"target must be 'up' or 'down', got {target!r}")


def _gap_squared(params: ModelParams, t: float) -> float:
    g = gamma_of_t(params, t)
    p2 = (params.drive_phase**2).real  # +1 or -1
    return p2 * g * g + params.nu**2 * (1.0 - params.delta)


def classify_phase(params: ModelParams, t: float) -> PTPhase:
    """Symmetric for gap^2 > tol^2, broken for gap^2 < -tol^2, EP between."""
    g2 = _gap_squared(params, t)
    collar = (EP_TOL * params.nu) ** 2
    if g2 > collar:
        return PTPhase.SYMMETRIC
    if g2 < -collar:
        return PTPhase.BROKEN
    return PTPhase.EXCEPTIONAL_POINT


def _phase_fix(v: np.ndarray) -> complex:
    """Unit phase that makes the largest-magnitude component real positive."""
    pivot = v[int(np.argmax(np.abs(v)))]
    if pivot == 0:
        return 1.0 + 0j
    return abs(pivot) / pivot


def eigensystem(params: ModelParams, t: float) -> SpectralData:
    """Instantaneous eigenvalues, biorthonormal eigenvectors, and diagnostics.

    Raises
    ------
    EPProximityError
        If |gap| <= EP_TOL * nu; eigenvectors are undefined there.
    """
    phase = classify_phase(params, t)
    if phase is PTPhase.EXCEPTIONAL_POINT:
        raise EPProximityError(f"gap closes within tolerance at t={t}")

    g = gamma_of_t(params, t)
    p = params.drive_phase
    nu = params.nu
    gap = cmath.sqrt(complex(_gap_squared(params, t)))
    e_plus = 0.5 * gap
    e_minus = -e_plus

    # (p g / 2 - E) v1 + (nu / 2) v2 = 0  =>  v = (nu/2, E - p g / 2)
    diag = 0.5 * p * g
    r_up = np.array([0.5 * nu, e_plus - diag], dtype=complex)
    r_down = np.array([0.5 * nu, e_minus - diag], dtype=complex)
    r_up *= _phase_fix(r_up) / np.linalg.norm(r_up)
    r_down *= _phase_fix(r_down) / np.linalg.norm(r_down)

    rmat = np.column_stack([r_up, r_down])
    lmat = np.linalg.inv(rmat)  # rows are the biorthonormal left vectors
    l_up, l_down = lmat[0].copy(), lmat[1].copy()

    # Rebalance each pair to the symmetric convention ||l|| = ||r||.
    for rv, lv in ((r_up, l_up), (r_down, l_down)):
        s = math.sqrt(np.linalg.norm(lv) / np.linalg.norm(rv))
        rv *= s
        lv /= s

    gep = params.gamma_ep
    if gep:
        eps = g / gep
        # theta = arccoth(eps): real and sign-carrying in the symmetric phase
        # of the real-diagonal family, complex once |eps| < 1.
        theta = 0.5 * cmath.log((eps + 1.0) / (eps - 1.0))
    else:
        eps = math.nan
        theta = complex(math.nan)

    return SpectralData(
        e_plus=e_plus,
        e_minus=e_minus,
        right_up=r_up,
        right_down=r_down,
        left_up=l_up,
        left_down=l_down,
        gap=gap,
        epsilon=eps,
        theta=theta,
        phase=phase,
    )


def relaxation_time(params: ModelParams, t: float) -> float:
    """tau_0 / sqrt(|eps^2 - 1|), equal to tau_0 * gamma_ep / |gap|.

    Raises
    ------
    DivergesAtEPError
        At the pole |eps| = 1 (within the EP collar).
    """
    eps = params.epsilon_of(t)
    d = abs(eps * eps - 1.0)
    if d <= 2.0 * EP_TOL:
        raise DivergesAtEPError(f"relaxation time diverges at |eps|=1 (eps={eps})")
    return params.tau_0_resolved / math.sqrt(d)
