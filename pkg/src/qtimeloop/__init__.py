"""Simulator for two-coupler feedback-in-time networks.

Builds a network out of two forward channels (g1, g2), a backward
propagator (m) and a shared two-port coupler, solves it in closed form,
cross-validates with an independent loop-unrolling iteration, and ships
the worked special cases plus resonance lineshape tooling.
"""

from .linalg import (
    DIM_CAP,
    SingularMatrixError,
    SplitterParams,
    adjoint,
    couple,
    coupler_matrix,
    invert,
    is_unitary,
    mat_mul,
    mat_vec,
    norm_sq,
    random_unitary,
    spectral_radius,
)
from .network import (
    FeedbackNetwork,
    NetworkSolution,
    SingularDenominatorError,
    solve_closed_form,
    transmitted_probability,
    verify_fixed_point,
)
from .oracle import IterationReport, NotConvergedError, loop_map, solve_by_iteration
from .scenarios import (
    GrandfatherParams,
    PhaseScanResult,
    SpecialCaseResult,
    build_grandfather,
    build_undo,
    grandfather_amplitude_ratios,
    grandfather_transmission,
    perturbative_check,
    phase_scan,
    predicted_fwhm,
    special_case_suite,
)

__version__ = "0.1.0"

__all__ = [
    "DIM_CAP",
    "FeedbackNetwork",
    "GrandfatherParams",
    "IterationReport",
    "NetworkSolution",
    "NotConvergedError",
    "PhaseScanResult",
    "SingularDenominatorError",
    "SingularMatrixError",
    "SpecialCaseResult",
    "SplitterParams",
    "adjoint",
    "build_grandfather",
    "build_undo",
    "couple",
    "coupler_matrix",
    "grandfather_amplitude_ratios",
    "grandfather_transmission",
    "invert",
    "is_unitary",
    "loop_map",
    "mat_mul",
    "mat_vec",
    "norm_sq",
    "perturbative_check",
    "phase_scan",
    "predicted_fwhm",
    "random_unitary",
    "solve_by_iteration",
    "solve_closed_form",
    "special_case_suite",
    "spectral_radius",
    "transmitted_probability",
    "verify_fixed_point",
]
