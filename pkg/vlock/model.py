# -*- coding: utf-8 -*-
"""
Generational dynamics: reproduction, one generation of migration plus
reproduction, and the locked-front map F = S^p ∘ G^q.

Lattice states are finite windows. The values just outside the window are
always supplied by the caller as left/right clamps.
"""

import logging
from typing import Sequence, Union

import numpy as np

from .exceptions import ParameterDomainError, WindowTooSmallError
from .parameters import Params, RationalSpeed

logger = logging.getLogger(__name__)

Clamp = Union[float, Sequence[float]]


def reproduction(u: float, params: Params) -> float:
    """
    Piecewise-linear reproduction g(u): r·u below c, capacity 1 at or above c.

    Args:
        u: Population density (≥ 0)
        params: Model parameters including c

    Returns:
        g(u)

    Raises:
        ParameterDomainError: If u is negative or c is missing

    Examples:
        >>> reproduction(0.5, Params(1.2, 0.1, 0.8))
        0.6
    """
    c = params.require_c()
    if u < 0:
        raise ParameterDomainError(f"Population density must be non-negative, got {u}")
    return 1.0 if u >= c else params.r * u


def _reproduce(w: np.ndarray, r: float, c: float) -> np.ndarray:
    return np.where(w >= c, 1.0, r * w)


def _migrate(state: np.ndarray, m: float, left: float, right: float) -> np.ndarray:
    padded = np.concatenate(([left], state, [right]))
    return 0.5 * m * padded[:-2] + (1.0 - m) * padded[1:-1] + 0.5 * m * padded[2:]


def _step(state: np.ndarray, r: float, m: float, c: float, left: float, right: float) -> np.ndarray:
    """Unchecked generation used by the simulation hot loop."""
    return _reproduce(_migrate(state, m, left, right), r, c)


def _check_state(state: np.ndarray) -> None:
    if state.ndim != 1:
        raise ParameterDomainError(f"Lattice state must be one-dimensional, got shape {state.shape}")
    if state.size and (state.min() < 0.0 or state.max() > 1.0):
        raise ParameterDomainError(
            f"Lattice state must lie in [0, 1], got range [{state.min():.3g}, {state.max():.3g}]"
        )


def generation(state: Sequence[float], params: Params, left: float, right: float) -> np.ndarray:
    """
    Apply one generation (migration, then reproduction) to a lattice window.

    Args:
        state: Densities on consecutive sites
        params: Model parameters including c
        left: Density of the site just left of the window
        right: Density of the site just right of the window

    Returns:
        New densities v_i = g((m/2)u_{i-1} + (1-m)u_i + (m/2)u_{i+1})

    Raises:
        ParameterDomainError: If densities or clamps fall outside [0, 1]
    """
    c = params.require_c()
    u = np.asarray(state, dtype=float)
    _check_state(u)
    for name, value in (('left', left), ('right', right)):
        if not 0.0 <= value <= 1.0:
            raise ParameterDomainError(f"{name} clamp must lie in [0, 1], got {value}")
    return _step(u, params.r, params.m, c, float(left), float(right))


def locked_map(state: Sequence[float], params: Params, speed: RationalSpeed,
               left: float, right: Clamp) -> np.ndarray:
    """
    Apply F = S^p ∘ G^q: q generations followed by a shift of p sites to the left.

    The last p sites of the result have no data inside the window; they are
    filled with the final right clamp value and should be treated as boundary
    margin by callers.

    Args:
        state: Densities on consecutive sites
        params: Model parameters including c
        speed: Target speed p/q
        left: Left clamp (held fixed for all q generations)
        right: Right clamp, either a constant or q per-generation values

    Returns:
        The mapped window, same length as ``state``

    Raises:
        WindowTooSmallError: If the window is shorter than 2q + p + 1 sites
        ParameterDomainError: If the clamp sequence has the wrong length
    """
    c = params.require_c()
    u = np.asarray(state, dtype=float)
    _check_state(u)
    p, q = speed.p, speed.q
    if u.size < 2 * q + p + 1:
        raise WindowTooSmallError(
            f"Window of {u.size} sites is too small for speed {speed}: need at least {2 * q + p + 1}"
        )

    if np.ndim(right) == 0:
        right_values = np.full(q, float(right))  # type: ignore[arg-type]
    else:
        right_values = np.asarray(right, dtype=float)
        if right_values.shape != (q,):
            raise ParameterDomainError(f"Need {q} right clamp values, got {right_values.shape}")

    for t in range(q):
        u = _step(u, params.r, params.m, c, float(left), float(right_values[t]))

    shifted = np.empty_like(u)
    shifted[:-p] = u[p:]
    shifted[-p:] = right_values[-1]
    logger.debug(f"locked_map {speed}: last {p} sites of {u.size} are boundary margin")
    return shifted
