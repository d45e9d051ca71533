# -*- coding: utf-8 -*-
"""
Direct simulation with a shifting window.

The first few sites start at capacity and the rest empty. After every
generation the window moves one site to the right (the state shifts left)
each time the trigger site has reached capacity, so the interface stays near
the left edge for arbitrarily many generations. The invasion speed is the
number of shifts divided by the number of measured generations.
"""

import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from .exceptions import BoundaryReachedError, ParameterDomainError, VlockError
from .model import _step
from .parameters import Params, RationalSpeed, SimConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpeedMeasurement:
    """Shift count over the measured generations"""

    shift_count: int
    generations: int

    @property
    def measured_speed(self) -> float:
        return self.shift_count / self.generations

    @property
    def as_fraction(self) -> Fraction:
        return Fraction(self.shift_count, self.generations)


def simulate_speed(params: Params, cfg: SimConfig = SimConfig()) -> SpeedMeasurement:
    """
    Measure the invasion speed by domain shifting.

    Args:
        params: Model parameters including c
        cfg: Simulation settings

    Returns:
        SpeedMeasurement over cfg.measure_generations generations

    Raises:
        BoundaryReachedError: If capacity reaches the right edge of the window
    """
    c = params.require_c()
    r, m = params.r, params.m
    u = np.zeros(cfg.lattice_size)
    u[:cfg.capacity_seed_width] = 1.0
    trigger = cfg.shift_trigger_site
    transient = cfg.transient_generations
    shifts = 0

    for t in range(transient + cfg.measure_generations):
        u = _step(u, r, m, c, 1.0, 0.0)
        while u[trigger] == 1.0:
            u[:-1] = u[1:]
            u[-1] = 0.0
            if t >= transient:
                shifts += 1
        if u[-1] == 1.0:
            raise BoundaryReachedError(
                f"Front reached the right edge at generation {t} (lattice_size={cfg.lattice_size})"
            )

    measurement = SpeedMeasurement(shift_count=shifts, generations=cfg.measure_generations)
    logger.debug(f"Simulated r={r}, m={m}, c={c}: speed {measurement.measured_speed:.6f}")
    return measurement


def count_resolution(generations: int) -> float:
    """
    Speed tolerance of one shift over the measured window.

    A locked orbit counted over a window that is not a multiple of q can be
    one shift away from p/q times the window length.
    """
    if generations < 1:
        raise ParameterDomainError(f"Need at least one measured generation, got {generations}")
    return 1.0 / generations


def classify_speed(meas: SpeedMeasurement, target: RationalSpeed, tol: Optional[float] = None) -> bool:
    """
    Whether a measured speed equals p/q within tol.

    Args:
        meas: Measurement
        target: Rational speed
        tol: Absolute tolerance; defaults to 1/(2·generations)

    Returns:
        True if |measured - p/q| ≤ tol
    """
    tol = 0.5 / meas.generations if tol is None else tol
    if tol <= 0:
        raise ParameterDomainError(f"Classification tolerance must be positive, got {tol}")
    return abs(meas.measured_speed - target.value) <= tol


def _measure_point(params: Params, cfg: SimConfig) -> dict:
    row = {'r': params.r, 'm': params.m, 'c': params.c}
    try:
        meas = simulate_speed(params, cfg)
        row.update(measured_speed=meas.measured_speed, shift_count=meas.shift_count,
                   generations=meas.generations, error="")
    except VlockError as e:
        logger.warning(f"Simulation failed at r={params.r}, m={params.m}, c={params.c}: {e}")
        row.update(measured_speed=np.nan, shift_count=-1, generations=cfg.measure_generations, error=str(e))
    return row


def run_speed_sweep(points: Sequence[Params], cfg: SimConfig, n_jobs: int = 1) -> pd.DataFrame:
    """
    Simulate many parameter points; failures are recorded, never raised.

    Args:
        points: Parameter sets (each with c)
        cfg: Simulation settings
        n_jobs: Worker count for joblib

    Returns:
        DataFrame with columns r, m, c, measured_speed, shift_count, generations, error
        in the order of ``points``
    """
    progress = tqdm(points, desc="Simulating", disable=not sys.stderr.isatty())
    if n_jobs == 1:
        rows = [_measure_point(params, cfg) for params in progress]
    else:
        rows = Parallel(n_jobs=n_jobs)(delayed(_measure_point)(params, cfg) for params in progress)
    failed = sum(1 for row in rows if row['error'])
    logger.info(f"Speed sweep finished: {len(rows)} points, {failed} failed")
    return pd.DataFrame(rows, columns=['r', 'm', 'c', 'measured_speed', 'shift_count', 'generations', 'error'])


def find_plateaus(m_values: Sequence[float], speeds: Sequence[float], value: float,
                  tol: float) -> List[Tuple[float, float]]:
    """
    Contiguous runs of grid points whose speed equals a given value.

    Args:
        m_values: Increasing m grid
        speeds: Measured speeds on the grid (NaN for failed points)
        value: Plateau speed, e.g. 1/3
        tol: Absolute tolerance on the speed

    Returns:
        List of (m_first, m_last) per run
    """
    m_arr = np.asarray(m_values, dtype=float)
    on = np.abs(np.asarray(speeds, dtype=float) - value) <= tol
    plateaus = []
    start = None
    for i, flag in enumerate(on):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            plateaus.append((float(m_arr[start]), float(m_arr[i - 1])))
            start = None
    if start is not None:
        plateaus.append((float(m_arr[start]), float(m_arr[-1])))
    return plateaus
