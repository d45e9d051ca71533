# -*- coding: utf-8 -*-
"""
Locking regions (tongues) in the (m, c) plane.

For fixed r and speed p/q the front exists for c_min(m) < c ≤ c_max(m) and
0 < m < m*(r). The boundaries come from the Γ sums of the constructed front:

    c_max = m/2 + (1-m)Γ_p     + (m/2)Γ_{p+q}
    c_min = m/2 + (1-m)Γ_{p+1} + (m/2)Γ_{p+q+1}

Small-m expansions of the roots, zetas and boundaries are provided for
comparison with the computed tongues.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from .exceptions import FrontConstructionError, ParameterDomainError, VlockError
from .front_builder import FrontProfile, build_front
from .linear_analysis import m_star
from .parameters import Params, RationalSpeed
from .root_engine import FrontRoots, diophantine
from .tolerances import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

# Relative distance of the sweep grid from 0 and from m*
GRID_DELTA = 1e-4
# Rounding allowance for Γ comparisons, in units of machine epsilon
MONOTONICITY_ULPS = 64

FLAG_OK = "ok"
FLAG_INCOMPATIBLE = "incompatible: c_max > 1/r"


@dataclass(frozen=True)
class CBounds:
    """Locking boundaries at one (r, m) point"""

    c_min: float
    c_max: float

    @property
    def width(self) -> float:
        return self.c_max - self.c_min


def rounding_allowance(profile: FrontProfile, n: int) -> float:
    terms = np.abs(profile.ks) * np.abs(1.0 / profile.roots.zetas) ** n
    return MONOTONICITY_ULPS * np.finfo(float).eps * float(terms.sum())


def monotonicity_violations(profile: FrontProfile, n_max: Optional[int] = None) -> List[int]:
    """
    Indices n in 1 … n_max where Γ_{n+1} < Γ_n fails beyond rounding.

    Args:
        profile: Constructed front
        n_max: Last index checked (default 3q)

    Returns:
        List of offending n (empty when monotone)
    """
    n_max = 3 * profile.speed.q if n_max is None else n_max
    violations = []
    for n in range(1, n_max + 1):
        if profile.gamma(n + 1) - profile.gamma(n) >= rounding_allowance(profile, n):
            violations.append(n)
    return violations


def _boundary_expression(profile: FrontProfile, shift: int) -> float:
    m, q = profile.params.m, profile.speed.q
    return 0.5 * m + (1.0 - m) * profile.gamma(shift) + 0.5 * m * profile.gamma(shift + q)


def bounds_from_profile(profile: FrontProfile) -> CBounds:
    """
    c_min and c_max from a constructed front, with the extremum checks.

    Over 1 ≤ p̃ ≤ p the boundary expression must be smallest at p̃ = p, and
    over p+1 ≤ p̃ ≤ q largest at p̃ = p+1.

    Raises:
        FrontConstructionError: If Γ is not decreasing or an extremum check fails
    """
    p, q = profile.speed.p, profile.speed.q
    violations = monotonicity_violations(profile)
    if violations:
        raise FrontConstructionError(
            f"Gamma sums are not decreasing at n={violations[:5]} (speed {profile.speed}, m={profile.params.m})"
        )

    values = {shift: _boundary_expression(profile, shift) for shift in range(1, q + 1)}
    c_max = values[p]
    c_min = values[p + 1]
    slack = rounding_allowance(profile, 1)
    if min(values[s] for s in range(1, p + 1)) < c_max - slack:
        raise FrontConstructionError(f"Upper boundary is not attained at p̃=p for {profile.speed}")
    if max(values[s] for s in range(p + 1, q + 1)) > c_min + slack:
        raise FrontConstructionError(f"Lower boundary is not attained at p̃=p+1 for {profile.speed}")
    return CBounds(c_min=c_min, c_max=c_max)


def c_bounds(params: Params, speed: RationalSpeed, tol: Tolerances = DEFAULT_TOLERANCES) -> CBounds:
    """
    Locking boundaries c_min(r, m) and c_max(r, m) for one speed.

    Args:
        params: Model parameters (c is ignored)
        speed: Target speed p/q
        tol: Tolerance set

    Returns:
        CBounds

    Raises:
        DegenerateConfigurationError: Near the tongue tip
        FrontConstructionError: On a Γ-monotonicity violation
    """
    profile = build_front(params.with_c(None), speed, tol)
    return bounds_from_profile(profile)


# ==============================================================================
# SWEEPS
# ==============================================================================

@dataclass(frozen=True, eq=False)
class LockingBand:
    """Boundaries of one speed's tongue over an m grid"""

    speed: RationalSpeed
    r: float
    m_grid: np.ndarray
    c_min_values: np.ndarray
    c_max_values: np.ndarray
    m_star: float
    saturated: bool = False
    flags: List[str] = field(default_factory=list)

    @property
    def valid(self) -> np.ndarray:
        """Mask of grid points where both boundaries were computed."""
        return np.isfinite(self.c_min_values) & np.isfinite(self.c_max_values)

    def to_frame(self) -> pd.DataFrame:
        """
        Tabulate the band.

        Returns:
            DataFrame with columns m, c_min, c_max, flags (plus asymptotic
            boundary columns for speeds 1/q)
        """
        df = pd.DataFrame({
            'm': self.m_grid,
            'c_min': self.c_min_values,
            'c_max': self.c_max_values,
            'flags': self.flags,
        })
        if self.speed.p == 1:
            slope_min, slope_max = asymptotic_c_bounds_1q(self.r, self.speed.q)
            df['c_min_asymptotic'] = slope_min * df['m']
            df['c_max_asymptotic'] = slope_max * df['m']
        return df

    def contains(self, m: float, c: float) -> bool:
        """Whether (m, c) lies inside the tongue, interpolating the boundaries in m."""
        mask = self.valid
        grid = self.m_grid[mask]
        if len(grid) < 2 or not grid[0] <= m <= grid[-1]:
            return False
        lower = float(np.interp(m, grid, self.c_min_values[mask]))
        upper = min(float(np.interp(m, grid, self.c_max_values[mask])), 1.0 / self.r)
        return lower < c <= upper

    def m_interval_at(self, c: float) -> Optional[Tuple[float, float]]:
        """
        Extent in m of the band at a fixed c.

        Args:
            c: Critical density

        Returns:
            (m_low, m_high) over grid points inside the band, or None
        """
        mask = self.valid
        upper = np.minimum(self.c_max_values, 1.0 / self.r)
        inside = mask & (self.c_min_values < c) & (c <= upper)
        if not inside.any():
            return None
        members = self.m_grid[inside]
        return float(members.min()), float(members.max())


def band_grid(m_top: float, m_count: int, delta: float = GRID_DELTA) -> np.ndarray:
    """
    m grid on (δ·m*, m*(1-δ)): log-spaced up to m*/2, linear above.

    Args:
        m_top: Tongue tip m*
        m_count: Number of points (≥ 2)
        delta: Relative distance from 0 and from m*

    Returns:
        Strictly increasing array of m values
    """
    if m_count < 2:
        raise ParameterDomainError(f"m_count must be ≥ 2, got {m_count}")
    n_log = m_count // 2
    low = np.geomspace(delta * m_top, 0.5 * m_top, n_log)
    high = np.linspace(0.5 * m_top, m_top * (1.0 - delta), m_count - n_log + 1)[1:]
    return np.concatenate([low, high])


def _band_point(r: float, m: float, speed: RationalSpeed, tol: Tolerances) -> Tuple[float, float, str]:
    try:
        bounds = c_bounds(Params(r, m), speed, tol)
    except VlockError as e:
        logger.warning(f"Band point {speed} r={r} m={m:.6g} failed: {e}")
        return math.nan, math.nan, f"{type(e).__name__}: {e}"
    flag = FLAG_INCOMPATIBLE if bounds.c_max > 1.0 / r else FLAG_OK
    return bounds.c_min, bounds.c_max, flag


def region_sweep(r: float, speed: RationalSpeed, m_count: int,
                 tol: Tolerances = DEFAULT_TOLERANCES, n_jobs: int = 1) -> LockingBand:
    """
    Compute one speed's tongue over an m grid below m*.

    Per-point failures are recorded in the flags and never abort the sweep.

    Args:
        r: Growth factor
        speed: Target speed
        m_count: Number of grid points (≥ 2)
        tol: Tolerance set
        n_jobs: Worker count for joblib

    Returns:
        LockingBand
    """
    tip = m_star(r, speed, tol)
    m_top = tip.m_star
    if tip.saturated:
        m_top = min(m_top, 1.0 - GRID_DELTA)
    grid = band_grid(m_top, m_count)

    if n_jobs == 1:
        results = [_band_point(r, m, speed, tol) for m in grid]
    else:
        results = Parallel(n_jobs=n_jobs)(delayed(_band_point)(r, m, speed, tol) for m in grid)

    c_min_values = np.array([res[0] for res in results])
    c_max_values = np.array([res[1] for res in results])
    flags = [res[2] for res in results]
    failed = sum(flag not in (FLAG_OK, FLAG_INCOMPATIBLE) for flag in flags)
    logger.info(f"Band {speed} at r={r}: m*={tip.m_star:.6g}, {len(grid)} points, {failed} failed")
    return LockingBand(speed=speed, r=r, m_grid=grid, c_min_values=c_min_values,
                       c_max_values=c_max_values, m_star=tip.m_star, saturated=tip.saturated, flags=flags)


# ==============================================================================
# ASYMPTOTICS
# ==============================================================================

def asymptotic_c_bounds_1q(r: float, q: int) -> Tuple[float, float]:
    """
    Leading-order slopes of c_min and c_max in m for speed 1/q.

    Args:
        r: Growth factor
        q: Denominator (≥ 2)

    Returns:
        ((Σ_{j=0}^{q-2} r^j)/2, (Σ_{j=0}^{q-1} r^j)/2)

    Examples:
        >>> [round(s, 6) for s in asymptotic_c_bounds_1q(1.2, 3)]
        [1.1, 1.82]
    """
    if q < 2:
        raise ParameterDomainError(f"q must be ≥ 2, got {q}")
    powers = [r ** j for j in range(q)]
    return 0.5 * sum(powers[:-1]), 0.5 * sum(powers)


def _unit_roots(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def asymptotic_front_roots(params: Params, speed: RationalSpeed) -> np.ndarray:
    """
    Small-m expansion γ_j ≈ a^{q/N}(ω_j + a^{p/N}(bq/N)ω_j²), ω_j the N-th roots of unity.

    Args:
        params: Model parameters
        speed: Target speed

    Returns:
        Array of N complex approximations, ω_0 = 1 first
    """
    p, q, n = speed.p, speed.q, speed.n
    a, b = params.a, params.b
    omega = _unit_roots(n)
    return a ** (q / n) * (omega + a ** (p / n) * (b * q / n) * omega ** 2)


def asymptotic_zetas(params: Params, speed: RationalSpeed) -> np.ndarray:
    """
    Small-m expansion ζ_j ≈ a^{-1/N}(ω_j^{ℓ1} - (b/N)a^{p/N}ω_j^{ℓ1+1}).

    Entry j corresponds to entry j of :func:`asymptotic_front_roots`.
    """
    p, n = speed.p, speed.n
    a, b = params.a, params.b
    ell1, _ = diophantine(speed.q, n)
    omega = _unit_roots(n)
    return a ** (-1.0 / n) * (omega ** ell1 - (b / n) * a ** (p / n) * omega ** (ell1 + 1))


def _nearest_relative_error(approximations: np.ndarray, computed: np.ndarray) -> float:
    distances = np.abs(approximations[:, None] - computed[None, :]).min(axis=1)
    return float(np.max(distances / np.abs(approximations)))


def asymptotic_root_errors(roots: FrontRoots, params: Params, speed: RationalSpeed) -> Tuple[float, float]:
    """
    How far the computed roots and zetas are from their small-m expansions.

    Each expansion value is matched to the nearest computed value, so the
    ordering of the selected roots does not matter.

    Args:
        roots: Selected front roots at (params, speed)
        params: Model parameters
        speed: Target speed

    Returns:
        (largest relative root error, largest relative zeta error)
    """
    root_error = _nearest_relative_error(asymptotic_front_roots(params, speed), roots.gammas)
    zeta_error = _nearest_relative_error(asymptotic_zetas(params, speed), roots.zetas)
    return root_error, zeta_error



def asymptotic_one_third(params: Params) -> Dict[str, float]:
    """
    Leading-order quantities of the speed-1/3 front as m → 0.

    Returns:
        Dictionary with k_1, zeta_1, zeta_2, gamma_sum_1 (Γ_1), c_min, c_max
    """
    a, b, r, m = params.a, params.b, params.r, params.m
    root_a = math.sqrt(a)
    return {
        'k_1': 0.5 + 0.5 * (1.0 + 0.5 * b) * root_a,
        'zeta_1': 1.0 / root_a - 0.5 * b,
        'zeta_2': -1.0 / root_a - 0.5 * b,
        'gamma_sum_1': (1.0 + b) * a,
        'c_min': 0.5 * (1.0 + r) * m,
        'c_max': 0.5 * (1.0 + r + r ** 2) * m,
    }


# ==============================================================================
# WIDTH SCALING
# ==============================================================================

def width_table(r: float, speed: RationalSpeed, m_range: Tuple[float, float], points: int,
                tol: Tolerances = DEFAULT_TOLERANCES) -> pd.DataFrame:
    """
    Band width c_max - c_min on a log-spaced m grid.

    Args:
        r: Growth factor
        speed: Target speed
        m_range: (m_low, m_high) inside (0, m*)
        points: Number of grid points (≥ 4)
        tol: Tolerance set

    Returns:
        DataFrame with columns m, c_min, c_max, width

    Raises:
        ParameterDomainError: If the range leaves (0, m*) or points < 4
    """
    m_low, m_high = m_range
    if points < 4:
        raise ParameterDomainError(f"Width scaling needs at least 4 points, got {points}")
    tip = m_star(r, speed, tol).m_star
    if not 0.0 < m_low < m_high < tip:
        raise ParameterDomainError(f"m range {m_range} must lie inside (0, m*={tip:.6g})")

    rows = []
    for m in np.geomspace(m_low, m_high, points):
        bounds = c_bounds(Params(r, float(m)), speed, tol)
        rows.append({'m': float(m), 'c_min': bounds.c_min, 'c_max': bounds.c_max, 'width': bounds.width})
    return pd.DataFrame(rows)


def width_scaling_exponent(r: float, speed: RationalSpeed, m_range: Tuple[float, float], points: int,
                           tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """
    Least-squares slope of log(width) against log(m); close to p for small m.

    Args:
        r: Growth factor
        speed: Target speed
        m_range: (m_low, m_high) inside (0, m*)
        points: Number of grid points (≥ 4)
        tol: Tolerance set

    Returns:
        Fitted exponent
    """
    return fit_width_exponent(width_table(r, speed, m_range, points, tol), speed)


def fit_width_exponent(df: pd.DataFrame, speed: RationalSpeed) -> float:
    """
    Slope of log(width) against log(m) for a table from :func:`width_table`.

    Raises:
        FrontConstructionError: If any width is not positive
    """
    if (df['width'] <= 0).any():
        raise FrontConstructionError(f"Non-positive band width for {speed}")
    slope, _ = np.polyfit(np.log(df['m']), np.log(df['width']), 1)
    logger.info(f"Width exponent for {speed}: {slope:.4f}")
    return float(slope)
