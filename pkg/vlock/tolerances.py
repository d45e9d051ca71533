# -*- coding: utf-8 -*-
"""
Numerical tolerances shared by all modules.

Every operation takes ``tol: Tolerances = DEFAULT_TOLERANCES`` so that the
CLI can override individual values with ``--tol-<name>`` while tests keep the
defaults pinned.
"""

from dataclasses import asdict, dataclass, fields, replace
from typing import Dict

from .exceptions import ParameterDomainError

# Root engine
ROOT_RESIDUAL = 1e-9         # relative residual of (a+bγ+aγ²)^q − λγ^N
MODULUS_COUNT = 1e-9         # relative slack of the closed disk |γ| ≤ γ_s
STRONG_ROOT_MATCH = 1e-9     # largest selected root vs bisection γ_s
CONJUGATE_PAIRING = 1e-9
MODULUS_GAP = 1e-8           # |γ_{N+1}| − |γ_N|, relative to γ_s

# Front builder
IMAG_RESIDUE = 1e-10
ZETA_SEPARATION = 1e-8
VANDERMONDE_AGREEMENT = 1e-10
COEFFICIENT_SUM = 1e-12

# Linear analysis
BISECTION = 1e-13
TIP_DEGENERACY = 1e-10

# Root engine and spectral
ROOT_SEPARATION = 1e-8       # distinct roots, relative to their modulus or γ_s


@dataclass(frozen=True)
class Tolerances:
    """Resolved tolerance set; field names double as ``--tol-<name>`` flags"""

    root_residual: float = ROOT_RESIDUAL
    modulus_count: float = MODULUS_COUNT
    strong_root_match: float = STRONG_ROOT_MATCH
    conjugate_pairing: float = CONJUGATE_PAIRING
    modulus_gap: float = MODULUS_GAP
    imag_residue: float = IMAG_RESIDUE
    zeta_separation: float = ZETA_SEPARATION
    vandermonde_agreement: float = VANDERMONDE_AGREEMENT
    coefficient_sum: float = COEFFICIENT_SUM
    bisection: float = BISECTION
    tip_degeneracy: float = TIP_DEGENERACY
    root_separation: float = ROOT_SEPARATION

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ParameterDomainError(f"Tolerance {f.name} must be positive, got {value}")

    def with_overrides(self, overrides: Dict[str, float]) -> "Tolerances":
        """
        Return a copy with some fields replaced.

        Args:
            overrides: Mapping from field name (dashes allowed) to value

        Returns:
            New Tolerances instance

        Raises:
            ParameterDomainError: If a name is unknown or a value is not positive
        """
        known = {f.name for f in fields(self)}
        cleaned = {}
        for name, value in overrides.items():
            key = name.replace('-', '_')
            if key not in known:
                raise ParameterDomainError(f"Unknown tolerance '{name}'. Known: {sorted(known)}")
            cleaned[key] = float(value)
        return replace(self, **cleaned)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()
