"""Model family: driven two-level Hamiltonians, quench protocols, parameter I/O.

The Hamiltonian is

    H(t) = 1/2 [[ p*gamma(t),        nu ],
                [ nu*(1-delta), -p*gamma(t) ]],

with p = (-1)^n for parity n in {0, 1/2, 1} and the drive
gamma(t) = sgn(t) |t/tau_q|^(eta/(1-eta)), which is the linear sweep t/tau_q
for eta = 1/2.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

__all__ = [
    "Parity",
    "ModelParams",
    "QuenchWindow",
    "gamma_of_t",
    "hamiltonian_at",
    "exceptional_points",
    "params_from_json",
]


class Parity(enum.Enum):
    """Parity tag n selecting the diagonal prefactor (-1)^n in {+1, i, -1}."""

    ZERO = "0"
    HALF = "1/2"
    ONE = "1"

    @property
    def phase(self) -> complex:
        return {Parity.ZERO: 1.0 + 0j, Parity.HALF: 1j, Parity.ONE: -1.0 + 0j}[self]

    @property
    def n(self) -> float:
        return {Parity.ZERO: 0.0, Parity.HALF: 0.5, Parity.ONE: 1.0}[self]

    @classmethod
    def coerce(cls, value) -> "Parity":
        if isinstance(value, Parity):
            return value
        if isinstance(value, str):
            try:
                return cls(value.strip())
            except ValueError:
                pass
        try:
            num = float(value)
        except (TypeError, ValueError):
            raise ValueError(f"not a valid parity tag: {value!r}") from None
        for member in cls:
            if math.isclose(num, member.n):
                return member
        raise ValueError(f"parity must be one of 0, 1/2, 1; got {value!r}")


@dataclass(frozen=True)
class ModelParams:
    """Constants of the Hamiltonian family.

    Attributes
    ----------
    parity : Parity
        Selects (-1)^n on the diagonal. ZERO with delta > 1 gives the
        PT-symmetric drive with exceptional points on the real gamma axis;
        HALF with delta = 0 gives the fully non-Hermitian (imaginary) drive.
    nu : float
        Coupling, used as the energy unit (default 1).
    delta : float
        Asymmetry of the off-diagonal couplings.
    eta : float
        Sweep exponent in (0, 1); eta = 1/2 is the linear quench.
    tau_q : float
        Quench time (inverse sweep rate), > 0.
    tau_0 : float or None
        Reference relaxation scale. If None it resolves to 1/gamma_ep when
        exceptional points exist and to 1/nu otherwise.
    """

    parity: Parity = Parity.ZERO
    nu: float = 1.0
    delta: float = 2.0
    eta: float = 0.5
    tau_q: float = 1.0
    tau_0: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity.coerce(self.parity))
        if not self.tau_q > 0:
            raise ValueError(f"tau_q must be > 0, got {self.tau_q}")
        if not self.nu > 0:
            raise ValueError(f"nu must be > 0, got {self.nu}")
        if not 0 < self.eta < 1:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")
        if self.tau_0 is not None and not self.tau_0 > 0:
            raise ValueError(f"tau_0 must be > 0 or None, got {self.tau_0}")

    @property
    def drive_phase(self) -> complex:
        return self.parity.phase

    @property
    def gamma_ep(self) -> float | None:
        """|gamma| where the gap closes on the real drive axis, or None."""
        p2 = self.drive_phase**2  # +1 or -1, always real
        d = p2.real * self.nu**2 * (self.delta - 1.0)
        if d > 0:
            return math.sqrt(d)
        if d == 0:
            return 0.0
        return None

    @property
    def tau_0_resolved(self) -> float:
        if self.tau_0 is not None:
            return self.tau_0
        gep = self.gamma_ep
        if gep:
            return 1.0 / gep
        return 1.0 / self.nu

    def epsilon_of(self, t: float) -> float:
        """Dimensionless distance gamma(t)/gamma_ep from the gap closing."""
        gep = self.gamma_ep
        if not gep:
            raise ValueError("epsilon is undefined: this family has no exceptional point")
        return gamma_of_t(self, t) / gep

    def time_of_gamma(self, gamma: float) -> float:
        """Invert the drive protocol: the time at which gamma(t) = gamma."""
        if gamma == 0.0:
            return 0.0
        expo = (1.0 - self.eta) / self.eta
        return math.copysign(abs(gamma) ** expo * self.tau_q, gamma)

    def with_tau_q(self, tau_q: float) -> "ModelParams":
        return replace(self, tau_q=tau_q)


@dataclass(frozen=True)
class QuenchWindow:
    """Integration window [t_start, t_end] walked in steps of dt."""

    t_start: float
    t_end: float
    dt: float

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError(f"need t_start < t_end, got [{self.t_start}, {self.t_end}]")
        if not 0 < self.dt <= (self.t_end - self.t_start):
            raise ValueError(f"dt must lie in (0, span], got {self.dt}")


def gamma_of_t(params: ModelParams, t: float) -> float:
    """Drive value sgn(t) |t/tau_q|^(eta/(1-eta)); total in t."""
    if t == 0.0:
        return 0.0
    expo = params.eta / (1.0 - params.eta)
    return math.copysign(abs(t / params.tau_q) ** expo, t)


def hamiltonian_at(params: ModelParams, t: float) -> np.ndarray:
    """Evaluate H(t) as a (2, 2) complex array."""
    g = gamma_of_t(params, t)
    p = params.drive_phase
    nu = params.nu
    return np.array(
        [
            [0.5 * p * g, 0.5 * nu],
            [0.5 * nu * (1.0 - params.delta), -0.5 * p * g],
        ],
        dtype=complex,
    )


def exceptional_points(params: ModelParams) -> list[float]:
    """Real drive values gamma at which the gap closes (may be empty)."""
    gep = params.gamma_ep
    if gep is None:
        return []
    if gep == 0.0:
        return [0.0]
    return [-gep, gep]


_JSON_KEYS = {"parity_n", "nu", "delta", "eta", "tau_q", "tau_0"}


def params_from_json(source: str | Path | dict) -> ModelParams:
    """Build ModelParams from a JSON document (dict, JSON text, or file path).

    Recognized keys: parity_n ("0" | "1/2" | "1"), nu, delta, eta, tau_q,
    tau_0. Missing keys take the dataclass defaults.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = Path(source).read_text() if Path(str(source)).is_file() else str(source)
        doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("model config must be a JSON object")
    unknown = set(doc) - _JSON_KEYS
    if unknown:
        raise ValueError(f"unknown model config keys: {sorted(unknown)}")
    kwargs = {}
    if "parity_n" in doc:
        kwargs["parity"] = Parity.coerce(doc["parity_n"])
    for key in ("nu", "delta", "eta", "tau_q"):
        if key in doc:
            kwargs[key] = float(doc[key])
    if "tau_0" in doc and doc["tau_0"] is not None:
        kwargs["tau_0"] = float(doc["tau_0"])
    return ModelParams(**kwargs)
