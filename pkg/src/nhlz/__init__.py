"""Slow-quench dynamics of two-level non-Hermitian Landau-Zener models.

Provides the model family (PT-symmetric and fully non-Hermitian drives),
instantaneous biorthogonal eigensystems, non-unitary Schroedinger integration,
adiabatic-impulse closed-form predictions, exact Weber-function solutions, and
the special functions they need.
"""

from .model import (
    ModelParams,
    Parity,
    QuenchWindow,
    exceptional_points,
    gamma_of_t,
    hamiltonian_at,
    params_from_json,
)
from .spectral import (
    EP_TOL,
    DivergesAtEPError,
    EPProximityError,
    PTPhase,
    SpectralData,
    classify_phase,
    eigensystem,
    relaxation_time,
)
from .dynamics import (
    DegenerateProjectionError,
    IntegratorConfig,
    NormOverflowError,
    ScenarioPhaseMismatchError,
    State,
    Trajectory,
    defect_density_run,
    integrate,
    left_projections,
    relative_occupation,
    truncation_time,
)
from .ai import (
    AIPrediction,
    alpha_broken,
    alpha_d2,
    alpha_symmetric,
    freeze_out,
    p_of_x,
    predict_d_broken,
    predict_d_down,
    predict_d_up,
    series_d,
)
from .specfun import (
    AccuracyLossError,
    SpecFunResult,
    erf_complex,
    erfi_complex,
    fresnel_c,
    fresnel_s,
    pcf_d,
)
from .exact import (
    ABCoefficients,
    ExactSolverParams,
    GammaPoleError,
    exact_coeffs,
    exact_state,
    perturbative_density,
)

__version__ = "0.1.0"
