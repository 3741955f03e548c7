"""Geometric phases and entanglement of two exchange-coupled spin-1/2
particles in a rotating magnetic field."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .config import ScenarioConfig, dump_config, load_config, parse_config
from .dynamics import Trajectory, evolve, fit_coefficients, propagate_analytic, propagate_expm, propagate_rk4
from .entanglement import SeparabilityReport, concurrence, concurrence_closed_form, is_always_separable
from .errors import (
    ConfigError,
    DegeneracyError,
    NonHermitianError,
    NumericDomainError,
    ResolutionError,
    SpinPhaseError,
    UndefinedBasisError,
    UndefinedPhaseError,
)
from .model import ModelParams, derived_angles
from .phases import (
    PhaseBreakdown,
    geometric_phase_mixed,
    geometric_phase_pure,
    partial_trace,
    subsystem_phase,
    subsystem_spectrum,
    wrapped_distance,
)

__all__ = [
    "BACKEND", "ConfigError", "DegeneracyError", "ModelParams", "NonHermitianError",
    "NumericDomainError", "PhaseBreakdown", "ResolutionError", "ScenarioConfig",
    "SeparabilityReport", "SpinPhaseError", "Trajectory", "UndefinedBasisError",
    "UndefinedPhaseError", "concurrence", "concurrence_closed_form", "derived_angles",
    "dump_config", "evolve", "fit_coefficients", "geometric_phase_mixed",
    "geometric_phase_pure", "is_always_separable", "load_config", "parse_config",
    "partial_trace", "propagate_analytic", "propagate_expm", "propagate_rk4",
    "subsystem_phase", "subsystem_spectrum", "wrapped_distance",
]
