"""Holevo bound on information broadcast from a harmonic oscillator into a
thermal spin environment, with closed forms cross-checked by brute force."""

from .gaussian import GaussianIntegralArgs, MuVector, decay_terms, gaussian_I, mu_components
from .holevo import (HolevoResult, MaximizationCondition, ShortTimeCoeff,
                     binary_entropy, chi_curve, chi_infinity, chi_max,
                     chi_timeseries, entropy_avg_state, holevo_chi,
                     maximization_condition, mu_infinity, short_time_lambda,
                     solve_condition_omega)
from .model import (BlochUnitary, CouplingRegimeWarning, ModelParams,
                    OscillatorInit, QubitBloch, ThermalEnv, WaveNumbers,
                    dimensionless, evolve_thermal, exponential_forms,
                    floquet_bloch, floquet_generators, initial_position_pdf,
                    wave_numbers, xi_at_3sigma)
from .oracle import (FloquetError, QuadratureSpec, entropy_numeric,
                     exact_propagator, floquet_error, gaussian_quadrature_I,
                     mu_numeric, phase_minimized_distance)

__all__ = [
    "BlochUnitary", "CouplingRegimeWarning", "FloquetError",
    "GaussianIntegralArgs", "HolevoResult", "MaximizationCondition",
    "ModelParams", "MuVector", "OscillatorInit", "QuadratureSpec",
    "QubitBloch", "ShortTimeCoeff", "ThermalEnv", "WaveNumbers",
    "binary_entropy", "chi_curve", "chi_infinity", "chi_max",
    "chi_timeseries", "decay_terms", "dimensionless", "entropy_avg_state",
    "entropy_numeric", "evolve_thermal", "exact_propagator",
    "exponential_forms", "floquet_bloch", "floquet_error",
    "floquet_generators", "gaussian_I", "gaussian_quadrature_I",
    "holevo_chi", "initial_position_pdf", "maximization_condition",
    "mu_components", "mu_infinity", "mu_numeric",
    "phase_minimized_distance", "short_time_lambda",
    "solve_condition_omega", "wave_numbers", "xi_at_3sigma",
]

__version__ = "0.1.0"
