"""Non-unitary Schroedinger integration and trajectory-level observables.

The integrator is a classical fixed-step RK4 on i d/dt psi = H(t) psi with
optional per-step norm stripping into an accumulated log-norm (mandatory in
practice whenever the window touches the PT-broken phase).
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .model import ModelParams, QuenchWindow, gamma_of_t
from .spectral import EPProximityError, SpectralData, eigensystem

__all__ = [
    "State",
    "Trajectory",
    "IntegratorConfig",
    "NormOverflowError",
    "DegenerateProjectionError",
    "ScenarioPhaseMismatchError",
    "integrate",
    "left_projections",
    "relative_occupation",
    "truncation_time",
    "defect_density_run",
    "SCENARIOS",
]

_OVERFLOW_LIMIT = 1e150
_FAR_EPSILON = 32.0  # dimensionless distance treated as "infinitely far"


class NormOverflowError(OverflowError):
    """Amplitudes exceeded the overflow guard with renormalization off."""


class DegenerateProjectionError(ArithmeticError):
    """Both left projections vanished; the relative occupation is undefined."""


class ScenarioPhaseMismatchError(ValueError):
    """Scenario and model family disagree about the phase structure."""


@dataclass(frozen=True)
class State:
    """Two complex amplitudes on the fixed basis plus accumulated log-norm."""

    c1: complex
    c2: complex
    log_norm: float = 0.0

    @classmethod
    def from_vector(cls, v, log_norm: float = 0.0) -> "State":
        return cls(complex(v[0]), complex(v[1]), log_norm)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=complex)

    @property
    def norm(self) -> float:
        return math.hypot(abs(self.c1), abs(self.c2))

    def normalized(self) -> "State":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return State(self.c1 / n, self.c2 / n, self.log_norm + math.log(n))


@dataclass(frozen=True)
class IntegratorConfig:
    """Step size, norm handling, and the broken-phase stop rule.

    dt = None resolves to min(1e-3 * tau_q, 1e-3), overridable through the
    NHQ_DT environment variable. sample_stride = 0 records endpoints only.
    """

    dt: float | None = None
    renormalize_each_step: bool = True
    truncation_factor: float = 1.0
    sample_stride: int = 1

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if not self.truncation_factor >= 1.0:
            raise ValueError(f"truncation_factor must be >= 1, got {self.truncation_factor}")
        if self.sample_stride < 0:
            raise ValueError(f"sample_stride must be >= 0, got {self.sample_stride}")

    def resolve_dt(self, params: ModelParams) -> float:
        if self.dt is not None:
            return self.dt
        env = os.environ.get("NHQ_DT")
        if env:
            return float(env)
        return min(1e-3 * params.tau_q, 1e-3)


@dataclass
class Trajectory:
    """Time series of the integrated state with per-sample diagnostics.

    proj_* are the biorthogonal left projections of the unit-normalized state;
    d_rel_* the relative occupations. Samples inside the EP collar carry NaN
    diagnostics (the state itself is always recorded).
    """

    times: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    log_norm: np.ndarray
    proj_up: np.ndarray
    proj_down: np.ndarray
    d_rel_up: np.ndarray
    d_rel_down: np.ndarray

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final_state(self) -> State:
        return State(complex(self.c1[-1]), complex(self.c2[-1]), float(self.log_norm[-1]))

    def to_csv(self, target) -> None:
        """Write the spec'd trajectory schema; target is a path or file object."""
        close = False
        if hasattr(target, "write"):
            fh = target
        else:
            fh = open(target, "w")
            close = True
        try:
            fh.write("t,re_c1,im_c1,re_c2,im_c2,log_norm,d_rel_up,d_rel_down\n")
            for i in range(len(self.times)):
                row = (
                    self.times[i],
                    self.c1[i].real, self.c1[i].imag,
                    self.c2[i].real, self.c2[i].imag,
                    self.log_norm[i],
                    self.d_rel_up[i], self.d_rel_down[i],
                )
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
        finally:
            if close:
                fh.close()


def left_projections(spec: SpectralData, s: State) -> tuple[complex, complex]:
    """Biorthogonal projections (<up_L|psi>, <down_L|psi>) of the state."""
    v = s.vector
    return complex(np.dot(spec.left_up, v)), complex(np.dot(spec.left_down, v))


def relative_occupation(spec: SpectralData, s: State, target: str) -> float:
    """|<target_L|psi>|^2 / (|<up_L|psi>|^2 + |<down_L|psi>|^2), in [0, 1]."""
    p_up, p_down = left_projections(spec, s)
    w_up = abs(p_up) ** 2
    w_down = abs(p_down) ** 2
    denom = w_up + w_down
    if denom < 1e-300:
        raise DegenerateProjectionError("both left projections vanish")
    if target == "up":
        return w_up / denom
    if target == "down":
        return w_down / denom
    raise ValueError(f"target must be 'up' or 'down', got {target!r}")


def _diagnostics(params: ModelParams, t: float, c1: complex, c2: complex):
    try:
        spec = eigensystem(params, t)
    except EPProximityError:
        return (complex(math.nan), complex(math.nan), math.nan, math.nan)
    n = math.hypot(abs(c1), abs(c2))
    v = np.array([c1 / n, c2 / n], dtype=complex)
    pu = complex(np.dot(spec.left_up, v))
    pd = complex(np.dot(spec.left_down, v))
    wu, wd = abs(pu) ** 2, abs(pd) ** 2
    denom = wu + wd
    if denom < 1e-300:
        return (pu, pd, math.nan, math.nan)
    return (pu, pd, wu / denom, wd / denom)


def integrate(params: ModelParams, window: QuenchWindow, initial: State,
              cfg: IntegratorConfig | None = None, _h_func=None) -> Trajectory:
    """Fixed-step RK4 integration of i d/dt psi = H(t) psi over the window.

    With renormalization on, the norm is stripped into log_norm after every
    step so the stored amplitudes stay unit length. With it off, amplitudes
    above 1e150 abort with NormOverflowError (enable renormalization for any
    window that enters the broken phase).

    _h_func is a test seam: a callable t -> (2, 2) array replacing the model
    Hamiltonian.
    """
    cfg = cfg or IntegratorConfig()
    dt = min(cfg.resolve_dt(params), window.t_end - window.t_start)
    n_steps = max(1, math.ceil((window.t_end - window.t_start) / dt - 1e-12))

    if _h_func is None:
        p = params.drive_phase
        half_nu = 0.5 * params.nu
        half_nu_d = 0.5 * params.nu * (1.0 - params.delta)

        def rhs(t, a, b):
            d = 0.5 * p * gamma_of_t(params, t)
            return -1j * (d * a + half_nu * b), -1j * (half_nu_d * a - d * b)
    else:
        def rhs(t, a, b):
            h = _h_func(t)
            return (
                -1j * (h[0, 0] * a + h[0, 1] * b),
                -1j * (h[1, 0] * a + h[1, 1] * b),
            )

    stride = cfg.sample_stride
    rec_idx = list(range(0, n_steps, stride)) if stride > 0 else [0]
    if rec_idx[-1] != n_steps:
        rec_idx.append(n_steps)
    n_rec = len(rec_idx)
    times = np.empty(n_rec)
    c1s = np.empty(n_rec, dtype=complex)
    c2s = np.empty(n_rec, dtype=complex)
    lns = np.empty(n_rec)

    c1, c2 = initial.c1, initial.c2
    log_norm = initial.log_norm
    t = window.t_start
    rec_pos = 0
    next_rec = rec_idx[0]

    for k in range(n_steps + 1):
        if k == next_rec:
            times[rec_pos] = t
            c1s[rec_pos], c2s[rec_pos] = c1, c2
            lns[rec_pos] = log_norm
            rec_pos += 1
            next_rec = rec_idx[rec_pos] if rec_pos < n_rec else -1
        if k == n_steps:
            break

        h = dt if k < n_steps - 1 else window.t_end - t
        k1a, k1b = rhs(t, c1, c2)
        k2a, k2b = rhs(t + 0.5 * h, c1 + 0.5 * h * k1a, c2 + 0.5 * h * k1b)
        k3a, k3b = rhs(t + 0.5 * h, c1 + 0.5 * h * k2a, c2 + 0.5 * h * k2b)
        k4a, k4b = rhs(t + h, c1 + h * k3a, c2 + h * k3b)
        c1 = c1 + (h / 6.0) * (k1a + 2.0 * (k2a + k3a) + k4a)
        c2 = c2 + (h / 6.0) * (k1b + 2.0 * (k2b + k3b) + k4b)
        t = window.t_start + (k + 1) * dt if k < n_steps - 1 else window.t_end

        if cfg.renormalize_each_step:
            n = math.hypot(abs(c1), abs(c2))
            c1 /= n
            c2 /= n
            log_norm += math.log(n)
        elif abs(c1.real) > _OVERFLOW_LIMIT or abs(c1.imag) > _OVERFLOW_LIMIT \
                or abs(c2.real) > _OVERFLOW_LIMIT or abs(c2.imag) > _OVERFLOW_LIMIT:
            raise NormOverflowError(
                "amplitudes exceeded 1e150; enable renormalize_each_step for "
                "broken-phase windows"
            )

    pu = np.empty(n_rec, dtype=complex)
    pd = np.empty(n_rec, dtype=complex)
    du = np.empty(n_rec)
    dd = np.empty(n_rec)
    if _h_func is None:
        for i in range(n_rec):
            pu[i], pd[i], du[i], dd[i] = _diagnostics(params, times[i], c1s[i], c2s[i])
    else:
        pu[:] = pd[:] = complex(math.nan)
        du[:] = dd[:] = math.nan

    return Trajectory(times, c1s, c2s, lns, pu, pd, du, dd)


def truncation_time(params: ModelParams, factor: float = 1.0) -> float:
    """|t| at which the instantaneous rate |d eps/dt / eps| falls to factor*|gap|.

    The root is bracketed between the gap closing (rate wins) and infinity
    (gap wins) and bisected to high relative accuracy. Returns the unscaled
    positive time; negate for left-side windows.
    """
    gep = params.gamma_ep
    if not gep:
        raise ScenarioPhaseMismatchError("no exceptional point: truncation undefined")
    t_ep = params.time_of_gamma(gep)
    rate_coeff = params.eta / (1.0 - params.eta)

    def f(u: float) -> float:
        g = gamma_of_t(params, u)
        p2 = (params.drive_phase**2).real
        gap2 = p2 * g * g + params.nu**2 * (1.0 - params.delta)
        return rate_coeff / u - factor * math.sqrt(abs(gap2))

    lo = t_ep * (1.0 + 1e-12)
    hi = t_ep * 2.0
    while f(hi) > 0:
        hi *= 2.0
        if hi > 1e12 * t_ep:
            raise ArithmeticError("truncation condition never satisfied")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi:
            break
    return 0.5 * (lo + hi)


def _require_family(params: ModelParams, scenario: str) -> None:
    p2 = (params.drive_phase**2).real
    if scenario.startswith("sym"):
        if p2 < 0 or params.delta <= 1.0:
            raise ScenarioPhaseMismatchError(
                f"scenario {scenario!r} needs the real-diagonal family with "
                f"delta > 1 (symmetric phase outside the gap closing)"
            )
    else:
        if p2 > 0 or params.delta >= 1.0:
            raise ScenarioPhaseMismatchError(
                f"scenario {scenario!r} needs the imaginary-diagonal family "
                f"with delta < 1 (broken phase outside the gap closing)"
            )


def _epsilon_initial(angle: float, scenario: str, theta0_mapping: str) -> float:
    if scenario.startswith("sym"):
        if not angle > 0:
            raise ValueError(f"theta0 must be > 0, got {angle}")
        if theta0_mapping == "tanh":
            return 1.0 / math.tanh(angle)
        if theta0_mapping == "arctan":
            return 1.0 / math.tan(angle)
        raise ValueError(f"theta0_mapping must be 'tanh' or 'arctan', got {theta0_mapping!r}")
    if not angle > 0:
        raise ValueError(f"alpha0 must be > 0, got {angle}")
    return math.cosh(angle)


SCENARIOS = ("sym_to_minus_ep", "sym_from_near_ep",
             "broken_from_minus_inf", "broken_from_near_ep")

# Measured relative occupation per scenario (label of the left eigenstate at
# the final time). "down" is the lower-energy branch in the symmetric phase
# and the decaying branch in the broken phase.
_SCENARIO_TARGET = {
    "sym_to_minus_ep": "down",
    "sym_from_near_ep": "up",
    "broken_from_minus_inf": "down",
    "broken_from_near_ep": "down",
}


def defect_density_run(params: ModelParams, scenario: str, angle: float,
                       cfg: IntegratorConfig | None = None,
                       tau_q: float | None = None,
                       theta0_mapping: str = "tanh") -> float:
    """Run one quench scenario and return its end-of-run defect density.

    Scenarios (angle is theta0 for the symmetric family, alpha0 for the
    broken one; the initial point sits at |eps| = coth(theta0), resp.
    cosh(alpha0)):

    - sym_to_minus_ep: ground state swept from the left through the gap
      closing; measured as the relative ground-state occupation on the far
      side (the state is frozen while crossing, so this realizes the
      down-density closed form).
    - sym_from_near_ep: ground state released just outside the gap closing
      and swept out; relative excited-state occupation at the far end.
    - broken_from_minus_inf: least-dissipative state swept toward the gap
      closing; window truncated where |d eps/dt / eps| = factor * |gap|.
    - broken_from_near_ep: least-dissipative state released near the gap
      closing and swept out to the truncation point.

    Raises ScenarioPhaseMismatchError when the model family does not have the
    phase structure the scenario needs.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    if tau_q is not None:
        params = params.with_tau_q(tau_q)
    _require_family(params, scenario)
    cfg = cfg or IntegratorConfig()

    gep = params.gamma_ep
    eps_i = _epsilon_initial(angle, scenario, theta0_mapping)

    if scenario == "sym_to_minus_ep":
        t_i = params.time_of_gamma(-eps_i * gep)
        t_f = params.time_of_gamma(max(1.5 * eps_i, _FAR_EPSILON) * gep)
    elif scenario == "sym_from_near_ep":
        t_i = params.time_of_gamma(eps_i * gep)
        t_f = params.time_of_gamma(max(1.5 * eps_i, _FAR_EPSILON) * gep)
    elif scenario == "broken_from_minus_inf":
        t_i = params.time_of_gamma(-eps_i * gep)
        t_f = -truncation_time(params, cfg.truncation_factor)
        if t_f <= t_i:
            raise ScenarioPhaseMismatchError(
                "truncation point precedes the initial time; increase alpha0 "
                "or tau_q"
            )
    else:  # broken_from_near_ep
        t_i = params.time_of_gamma(eps_i * gep)
        t_f = truncation_time(params, cfg.truncation_factor)
        if t_f <= t_i:
            raise ScenarioPhaseMismatchError(
                "truncation point precedes the initial time; decrease alpha0 "
                "or tau_q"
            )

    spec_i = eigensystem(params, t_i)
    if scenario.startswith("sym"):
        v0 = spec_i.right_down  # adiabatic ground state
    else:
        v0 = spec_i.right_up  # least-dissipative (largest Im E)
    initial = State.from_vector(v0 / np.linalg.norm(v0))

    run_cfg = replace(cfg, sample_stride=0) if cfg.sample_stride == 1 else cfg
    window = QuenchWindow(t_i, t_f, run_cfg.resolve_dt(params))
    traj = integrate(params, window, initial, run_cfg)
    spec_f = eigensystem(params, t_f)
    return relative_occupation(spec_f, traj.final_state, _SCENARIO_TARGET[scenario])
