# -*- coding: utf-8 -*-
"""
Rational-speed locked invasion fronts in a lattice population model
"""

from .exceptions import (
    VlockError,
    ParameterDomainError,
    DegenerateConfigurationError,
    RootEngineError,
    FrontConstructionError,
    WindowTooSmallError,
    BoundaryReachedError
)
from .tolerances import Tolerances, DEFAULT_TOLERANCES
from .parameters import Params, RationalSpeed, SimConfig, coprime_speeds, farey_sequence
from .model import reproduction, generation, locked_map
from .lattice_sim import SpeedMeasurement, simulate_speed, classify_speed, run_speed_sweep, find_plateaus
from .linear_analysis import (
    dispersion,
    envelope_speed,
    linear_spreading_speed,
    decay_rates_for_speed,
    m_star,
    slin_m_derivative
)
from .root_engine import FrontRoots, char_roots, select_front_roots, diophantine, fractional_root
from .front_builder import (
    FrontProfile,
    build_front,
    solve_coefficients,
    gamma_sum,
    fixed_point_residual,
    positivity_certificate,
    generation_profiles
)
from .locking_regions import (
    CBounds,
    LockingBand,
    c_bounds,
    region_sweep,
    asymptotic_c_bounds_1q,
    width_scaling_exponent
)
from .spectral import (
    WeightedSpace,
    essential_spectrum_curve,
    lambda_max,
    stability_margin,
    point_spectrum_scan
)

__all__ = [
    'VlockError',
    'ParameterDomainError',
    'DegenerateConfigurationError',
    'RootEngineError',
    'FrontConstructionError',
    'WindowTooSmallError',
    'BoundaryReachedError',
    'Tolerances',
    'DEFAULT_TOLERANCES',
    'Params',
    'RationalSpeed',
    'SimConfig',
    'coprime_speeds',
    'farey_sequence',
    'reproduction',
    'generation',
    'locked_map',
    'SpeedMeasurement',
    'simulate_speed',
    'classify_speed',
    'run_speed_sweep',
    'find_plateaus',
    'dispersion',
    'envelope_speed',
    'linear_spreading_speed',
    'decay_rates_for_speed',
    'm_star',
    'slin_m_derivative',
    'FrontRoots',
    'char_roots',
    'select_front_roots',
    'diophantine',
    'fractional_root',
    'FrontProfile',
    'build_front',
    'solve_coefficients',
    'gamma_sum',
    'fixed_point_residual',
    'positivity_certificate',
    'generation_profiles',
    'CBounds',
    'LockingBand',
    'c_bounds',
    'region_sweep',
    'asymptotic_c_bounds_1q',
    'width_scaling_exponent',
    'WeightedSpace',
    'essential_spectrum_curve',
    'lambda_max',
    'stability_margin',
    'point_spectrum_scan'
]
