"""Two-level adiabatic evolution: exact and adiabatic propagators, approximation
conditions of the first and second kind, and running-time bounds for ``H(t/T)``."""

from .errors import (
    AdiabatError,
    DegenerateSpectrum,
    DomainError,
    GridMismatch,
    InvalidDelta,
    NonHermitianObservable,
    SameLevel,
    SpecError,
    UnitarityError,
)
from .evolve import (
    CoefficientTrace,
    ErrorNorms,
    UnitaryTrace,
    build_aeo,
    coefficients,
    error_norm,
    expectation,
    propagate_deo,
)
from .model import (
    HamiltonianSpec,
    LinearInterp,
    Rotating,
    TabulatedScaled,
    TimeGrid,
    d2h_ds2,
    dh_ds,
    hamiltonian_at,
    spectral_norm,
)
from .rotating import RotatingParams, analytic_interaction_unitary, dr_report
from .scaling import BoundReport, f_of_s, sweep_error_vs_T, theorem2_min_time
from .spectral import EigenFrame, build_frame, eig2, hellmann_feynman_residual

__version__ = "0.1.0"
