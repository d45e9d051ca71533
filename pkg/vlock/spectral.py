# -*- coding: utf-8 -*-
"""
Spectral stability of locked fronts in exponentially weighted spaces.

Ahead of the interface the linearized locked map F = S^p ∘ G^q acts on
weighted perturbations (weights γ̄^{-i}) as a constant-coefficient operator
whose spectrum is the curve

    λ(k) = (γ̄e^{ik})^p · (a(γ̄e^{ik})^{-1} + b + aγ̄e^{ik})^q,   k ∈ [0, 2π).

Its rightmost point λ_max = (a + bγ̄ + aγ̄²)^q / γ̄^{q-p} lies inside the unit
circle for every weight strictly between γ_s and γ_w. Behind the interface
the linearization vanishes (g' = 0 at capacity) and contributes only the
point 0.

Eigenvalues with |λ| ≥ 1 are excluded sample by sample: the characteristic
polynomial at λ has exactly N = q - p roots in the disk of radius γ_s, and
when they are distinct their Vandermonde matrix is nonsingular, so the
matching conditions admit no eigenfunction.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List

import numpy as np
import pandas as pd

from .exceptions import ParameterDomainError, RootEngineError
from .linear_analysis import decay_rates_for_speed, trinomial
from .parameters import Params, RationalSpeed
from .root_engine import char_roots
from .tolerances import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

MIN_K_COUNT = 16
RING_ANGLES = 16
RING_RADII = (1.0, 1.5)

VERDICT_EXCLUDED = "excluded"
VERDICT_DEGENERATE = "degenerate"


@dataclass(frozen=True)
class WeightedSpace:
    """Sequence space with weights γ̄^{-i} ahead of the interface"""

    weight_rate: float

    def __post_init__(self):
        if not 0.0 < self.weight_rate <= 1.0:
            raise ParameterDomainError(f"Weight rate must lie in (0, 1], got {self.weight_rate}")


@dataclass(frozen=True, eq=False)
class SpectrumCurve:
    """Sampled essential-spectrum boundary for one weight"""

    k_samples: np.ndarray
    lambda_values: np.ndarray
    lambda_max_modulus: float
    lambda_max: float
    closure_error: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'k': self.k_samples,
            're_lambda': self.lambda_values.real,
            'im_lambda': self.lambda_values.imag,
            'modulus': np.abs(self.lambda_values),
        })


def _symbol(z: np.ndarray, params: Params, speed: RationalSpeed) -> np.ndarray:
    a, b = params.a, params.b
    return z ** speed.p * (a / z + b + a * z) ** speed.q


def essential_spectrum_curve(params: Params, speed: RationalSpeed, space: WeightedSpace,
                             k_count: int = 256) -> SpectrumCurve:
    """
    Sample the essential-spectrum boundary λ(k) in the weighted space.

    Args:
        params: Model parameters
        speed: Target speed
        space: Weighted space (γ̄ = 1 is the unweighted case)
        k_count: Number of samples on [0, 2π) (≥ 16)

    Returns:
        SpectrumCurve
    """
    if k_count < MIN_K_COUNT:
        raise ParameterDomainError(f"k_count must be ≥ {MIN_K_COUNT}, got {k_count}")
    k = np.linspace(0.0, 2.0 * np.pi, k_count, endpoint=False)
    z = space.weight_rate * np.exp(1j * k)
    values = _symbol(z, params, speed)
    end = _symbol(np.array([space.weight_rate * np.exp(2j * np.pi)]), params, speed)[0]
    closure = float(abs(end - values[0]))
    return SpectrumCurve(
        k_samples=k,
        lambda_values=values,
        lambda_max_modulus=float(np.abs(values).max()),
        lambda_max=float(values[0].real),
        closure_error=closure,
    )


def lambda_max(params: Params, speed: RationalSpeed, weight_rate: float) -> float:
    """
    Rightmost point (a + bγ̄ + aγ̄²)^q / γ̄^{q-p} of the weighted curve.

    Args:
        params: Model parameters
        speed: Target speed
        weight_rate: γ̄ in (0, 1]

    Returns:
        λ_max (equal to 1 at γ̄ = γ_s and γ̄ = γ_w)
    """
    WeightedSpace(weight_rate)
    return trinomial(weight_rate, params) ** speed.q / weight_rate ** speed.n


def stability_weight(params: Params, speed: RationalSpeed, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Geometric mean √(γ_s·γ_w) of the two decay rates."""
    pair = decay_rates_for_speed(params, speed, tol)
    pair.require_regular()
    return math.sqrt(pair.gamma_s * pair.gamma_w)


def stability_margin(params: Params, speed: RationalSpeed, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """
    1 - λ_max at the weight √(γ_s·γ_w); positive when the essential spectrum is stable.

    Args:
        params: Model parameters
        speed: Target speed
        tol: Tolerance set

    Returns:
        Stability margin

    Raises:
        DegenerateConfigurationError: At the tongue tip
    """
    weight = stability_weight(params, speed, tol)
    margin = 1.0 - lambda_max(params, speed, weight)
    logger.debug(f"Stability margin for {speed} at m={params.m}: {margin:.6g} (weight {weight:.6g})")
    return margin


# ==============================================================================
# POINT SPECTRUM
# ==============================================================================

@dataclass(frozen=True)
class PointSpectrumVerdict:
    """Outcome of the eigenvalue exclusion test at one λ"""

    lam: complex
    verdict: str
    inside_count: int
    min_separation: float
    max_inside_modulus: float
    reason: str = ""

    @property
    def excluded(self) -> bool:
        return self.verdict == VERDICT_EXCLUDED


def default_lambda_ring() -> List[complex]:
    """16 equispaced angles on each of the circles |λ| = 1 and |λ| = 1.5."""
    angles = 2.0 * np.pi * np.arange(RING_ANGLES) / RING_ANGLES
    return [complex(radius * np.exp(1j * theta)) for radius in RING_RADII for theta in angles]


def point_spectrum_scan(params: Params, speed: RationalSpeed, lambda_samples: Iterable[complex],
                        tol: Tolerances = DEFAULT_TOLERANCES) -> List[PointSpectrumVerdict]:
    """
    Test each λ with |λ| ≥ 1 for exclusion from the point spectrum.

    Args:
        params: Model parameters
        speed: Target speed
        lambda_samples: Spectral parameters with |λ| ≥ 1
        tol: Tolerance set (``modulus_count``, ``root_separation``, ``root_residual``)

    Returns:
        One verdict per sample, in input order

    Raises:
        ParameterDomainError: If a sample lies inside the unit circle
    """
    samples = [complex(lam) for lam in lambda_samples]
    for lam in samples:
        if abs(lam) < 1.0 - 1e-12:
            raise ParameterDomainError(f"Point-spectrum samples need |lambda| ≥ 1, got {lam}")

    pair = decay_rates_for_speed(params, speed, tol)
    pair.require_regular()
    radius = pair.gamma_s * (1.0 + tol.modulus_count)
    n = speed.n

    verdicts = []
    for lam in samples:
        try:
            roots = char_roots(params, speed, lam, tol)
        except RootEngineError as e:
            verdicts.append(PointSpectrumVerdict(lam, VERDICT_DEGENERATE, 0, math.nan, math.nan, str(e)))
            continue
        inside = roots[np.abs(roots) <= radius]
        if len(inside) > 1:
            gaps = np.abs(inside[:, None] - inside[None, :])
            gaps[np.diag_indices(len(inside))] = np.inf
            separation = float(gaps.min())
        else:
            separation = math.inf
        max_modulus = float(np.abs(inside).max()) if len(inside) else 0.0

        if len(inside) != n:
            reason = f"{len(inside)} roots inside the gamma_s disk, expected {n}"
            verdict = VERDICT_DEGENERATE
        elif separation <= tol.root_separation * pair.gamma_s:
            reason = f"inside roots nearly coincide (separation {separation:.3e})"
            verdict = VERDICT_DEGENERATE
        else:
            reason = ""
            verdict = VERDICT_EXCLUDED
        if reason:
            logger.warning(f"Point spectrum sample lambda={lam:.4g} for {speed}: {reason}")
        verdicts.append(PointSpectrumVerdict(lam, verdict, len(inside), separation, max_modulus, reason))
    return verdicts


def verdicts_frame(verdicts: List[PointSpectrumVerdict]) -> pd.DataFrame:
    """Tabulate point-spectrum verdicts."""
    return pd.DataFrame([{
        're_lambda': v.lam.real,
        'im_lambda': v.lam.imag,
        'verdict': v.verdict,
        'inside_count': v.inside_count,
        'min_separation': v.min_separation,
        'max_inside_modulus': v.max_inside_modulus,
        'reason': v.reason,
    } for v in verdicts])
