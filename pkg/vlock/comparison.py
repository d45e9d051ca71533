# -*- coding: utf-8 -*-
"""
Theory vs simulation comparison.

Checks that the two pipelines describe the same locking phenomenon:
a grid cell is "locked" when the simulated speed equals p/q, and "inside"
when the constructed boundaries put (m, c) in the tongue. Disagreements are
expected only next to a theoretical boundary, where the finite simulation
cannot resolve the transition.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.ndimage import maximum_filter, minimum_filter

from .exceptions import ParameterDomainError, VlockError
from .lattice_sim import classify_speed, count_resolution, find_plateaus, run_speed_sweep, SpeedMeasurement
from .linear_analysis import m_star
from .locking_regions import c_bounds, region_sweep
from .parameters import Params, RationalSpeed, SimConfig
from .tolerances import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

# Minimum share of agreeing cells for a comparison to pass
AGREEMENT_THRESHOLD = 0.95

STATUS_AGREE = "agree"
STATUS_BOUNDARY = "boundary disagreement"
STATUS_INTERIOR = "interior disagreement"
STATUS_FAILED = "failed"


def theory_grid(r: float, speed: RationalSpeed, m_values: Sequence[float], c_values: Sequence[float],
                tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Theoretical band membership c_min(m) < c ≤ min(c_max(m), 1/r) on a grid.

    Args:
        r: Growth factor
        speed: Target speed
        m_values: m grid (rows)
        c_values: c grid (columns)
        tol: Tolerance set

    Returns:
        Boolean array of shape (len(m_values), len(c_values)); rows at or
        beyond m* and rows whose boundaries fail are all False
    """
    c_arr = np.asarray(c_values, dtype=float)
    inside = np.zeros((len(m_values), len(c_arr)), dtype=bool)
    tip = m_star(r, speed, tol).m_star
    for row, m in enumerate(m_values):
        if not 0.0 < m < tip:
            continue
        try:
            bounds = c_bounds(Params(r, float(m)), speed, tol)
        except VlockError as e:
            logger.warning(f"No boundaries for {speed} at m={m:.6g}: {e}")
            continue
        upper = min(bounds.c_max, 1.0 / r)
        inside[row] = (bounds.c_min < c_arr) & (c_arr <= upper)
    return inside


def boundary_adjacent(inside: np.ndarray) -> np.ndarray:
    """Cells whose 3×3 neighbourhood contains both members and non-members."""
    grid = np.asarray(inside, dtype=bool).astype(np.uint8)
    return maximum_filter(grid, size=3, mode='nearest') != minimum_filter(grid, size=3, mode='nearest')


def agreement_statistics(locked: np.ndarray, inside: np.ndarray,
                         valid: Optional[np.ndarray] = None) -> Dict:
    """
    Compare simulated locking with theoretical membership.

    Args:
        locked: Boolean grid from simulation
        inside: Boolean grid from the theory
        valid: Mask of cells that produced a measurement (default all)

    Returns:
        Dictionary with agreement_fraction, disagreement_count,
        disagreements_boundary_adjacent, cells, passed
    """
    locked = np.asarray(locked, dtype=bool)
    inside = np.asarray(inside, dtype=bool)
    if locked.shape != inside.shape:
        raise ParameterDomainError(f"Grid shapes differ: {locked.shape} vs {inside.shape}")
    valid = np.ones_like(locked) if valid is None else np.asarray(valid, dtype=bool)

    cells = int(valid.sum())
    disagree = (locked != inside) & valid
    count = int(disagree.sum())
    fraction = (cells - count) / cells if cells > 0 else 0.0
    confined = bool(np.all(boundary_adjacent(inside)[disagree]))

    return {
        'agreement_fraction': fraction,
        'disagreement_count': count,
        'disagreements_boundary_adjacent': confined,
        'cells': cells,
        'passed': fraction >= AGREEMENT_THRESHOLD and confined,
    }


def compare_grid(r: float, speed: RationalSpeed, m_values: Sequence[float], c_values: Sequence[float],
                 cfg: SimConfig, tol: Tolerances = DEFAULT_TOLERANCES,
                 n_jobs: int = 1) -> Tuple[pd.DataFrame, Dict]:
    """
    Simulate every (m, c) cell and classify it against the theoretical band.

    A cell is locked when its shift count is within one shift of p/q times
    the measured window. Cells with r·c > 1 are recorded as failed rather
    than simulated.

    Args:
        r: Growth factor
        speed: Target speed
        m_values: m grid
        c_values: c grid
        cfg: Simulation settings
        tol: Tolerance set
        n_jobs: Worker count for joblib

    Returns:
        (DataFrame with columns m, c, measured_speed, locked, theory_inside,
        status, error in row-major grid order; statistics dictionary)
    """
    inside = theory_grid(r, speed, m_values, c_values, tol)
    adjacent = boundary_adjacent(inside)

    cells = [(i, j) for i in range(len(m_values)) for j in range(len(c_values))]
    points: List[Params] = []
    skipped = {}
    for i, j in cells:
        try:
            points.append(Params(r, float(m_values[i]), float(c_values[j])))
        except ParameterDomainError as e:
            skipped[(i, j)] = str(e)

    sims = run_speed_sweep(points, cfg, n_jobs).to_dict('records')
    sim_iter = iter(sims)

    rows = []
    locked = np.zeros_like(inside)
    valid = np.zeros_like(inside)
    for i, j in cells:
        row = {'m': float(m_values[i]), 'c': float(c_values[j]), 'theory_inside': bool(inside[i, j])}
        if (i, j) in skipped:
            row.update(measured_speed=np.nan, locked=False, status=STATUS_FAILED, error=skipped[(i, j)])
            rows.append(row)
            continue
        sim = next(sim_iter)
        if sim['error']:
            row.update(measured_speed=np.nan, locked=False, status=STATUS_FAILED, error=sim['error'])
            rows.append(row)
            continue
        meas = SpeedMeasurement(shift_count=int(sim['shift_count']), generations=int(sim['generations']))
        is_locked = classify_speed(meas, speed, count_resolution(meas.generations))
        locked[i, j] = is_locked
        valid[i, j] = True
        if is_locked == inside[i, j]:
            status = STATUS_AGREE
        elif adjacent[i, j]:
            status = STATUS_BOUNDARY
        else:
            status = STATUS_INTERIOR
        row.update(measured_speed=meas.measured_speed, locked=bool(is_locked), status=status, error="")
        rows.append(row)

    stats = agreement_statistics(locked, inside, valid)
    logger.info(
        f"Comparison {speed} at r={r}: {stats['agreement_fraction']:.1%} agreement, "
        f"{stats['disagreement_count']} disagreements, boundary-confined={stats['disagreements_boundary_adjacent']}"
    )
    df = pd.DataFrame(rows, columns=['m', 'c', 'measured_speed', 'locked', 'theory_inside', 'status', 'error'])
    return df, stats


def band_spanning_grid(r: float, speed: RationalSpeed, m_points: int, c_points: int,
                       scale: Tuple[float, float] = (0.5, 1.5),
                       tol: Tolerances = DEFAULT_TOLERANCES) -> Tuple[np.ndarray, np.ndarray]:
    """
    (m, c) grid spanning a tongue between scale[0] and scale[1] times its extent.

    The c range is taken from the boundaries at m*/2 and clipped to r·c ≤ 1.

    Returns:
        (m_values, c_values)
    """
    tip = m_star(r, speed, tol).m_star
    m_values = np.linspace(tip / m_points, min(scale[1] * tip, 1.0 - 1e-6), m_points)
    mid = c_bounds(Params(r, 0.5 * tip), speed, tol)
    c_high = min(scale[1] * mid.c_max, 1.0 / r)
    c_values = np.linspace(scale[0] * mid.c_min, c_high, c_points)
    return m_values, c_values


def staircase_plateaus(m_values: Sequence[float], measured: Sequence[float], r: float, c: float,
                       speeds: Sequence[RationalSpeed], speed_tol: float, m_count: int = 200,
                       tol: Tolerances = DEFAULT_TOLERANCES) -> pd.DataFrame:
    """
    Match plateaus of a measured staircase with the theoretical bands at fixed c.

    Args:
        m_values: Increasing m grid of the staircase
        measured: Measured speeds on that grid
        r: Growth factor
        c: Critical density of the staircase
        speeds: Plateau speeds to look for
        speed_tol: Absolute tolerance on the measured speed
        m_count: Grid size for each band sweep
        tol: Tolerance set

    Returns:
        DataFrame with columns speed, plateau_m_min, plateau_m_max,
        band_m_min, band_m_max, overlaps (one row per plateau, or one
        empty row per speed without plateau)
    """
    rows = []
    for speed in speeds:
        band = region_sweep(r, speed, m_count, tol)
        interval = band.m_interval_at(c)
        band_low, band_high = interval if interval is not None else (np.nan, np.nan)
        plateaus = find_plateaus(m_values, measured, speed.value, speed_tol) or [(np.nan, np.nan)]
        for low, high in plateaus:
            overlaps = bool(interval is not None and not np.isnan(low) and low <= band_high and band_low <= high)
            rows.append({'speed': str(speed), 'plateau_m_min': low, 'plateau_m_max': high,
                         'band_m_min': band_low, 'band_m_max': band_high, 'overlaps': overlaps})
    return pd.DataFrame(rows)
