"""Adiabatic interpolation schedules and ground-state entanglement diagnostics."""

from .algorithms import COLORS, Algorithm, ProblemSpec, analytic_low_spectrum, hamiltonian_at, make_spec
from .distances import fidelity_distance, geometric_separation
from .entanglement import GeometricResult, closest_product, entropy_of, schmidt_mus, vn_entropy
from .numerics import ConvergenceError, NumericalError, jacobi_eigensystem
from .schedule import AdiabaticProfile, adiabatic_profile, optimized_runtime, unoptimized_runtime
from .trace import Trace, correlation_report, run_trace, runtime_table

__version__ = "0.1.0"

__all__ = [
    "COLORS",
    "Algorithm",
    "ProblemSpec",
    "analytic_low_spectrum",
    "hamiltonian_at",
    "make_spec",
    "fidelity_distance",
    "geometric_separation",
    "GeometricResult",
    "closest_product",
    "entropy_of",
    "schmidt_mus",
    "vn_entropy",
    "ConvergenceError",
    "NumericalError",
    "jacobi_eigensystem",
    "AdiabaticProfile",
    "adiabatic_profile",
    "optimized_runtime",
    "unoptimized_runtime",
    "Trace",
    "correlation_report",
    "run_trace",
    "runtime_table",
]
