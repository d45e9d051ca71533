# -*- coding: utf-8 -*-
"""
Linearization at the unstable zero state.

Exponential solutions λ^t γ^i of the linearized lattice map satisfy the
dispersion relation λ(γ) = (a + bγ + aγ²)/γ and travel with the envelope
velocity s_env(γ) = -log λ(γ) / log γ. The linear spreading speed s_lin is the
minimum of s_env over (0, 1); for a target speed p/q above s_lin there are two
real decay rates γ_s < γ_lin < γ_w with s_env = p/q.

Root searches run in x = log γ: at small m the strong decay rate is tiny and
s_env approaches its limit 1 only logarithmically, so brackets in γ itself
would need absurdly small endpoints.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.optimize import brentq

from .exceptions import DegenerateConfigurationError, ParameterDomainError
from .parameters import Params, RationalSpeed
from .tolerances import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

Number = Union[float, complex]

# Relative distance to the a = 1 boundary used as the upper end of m searches
M_UPPER_MARGIN = 1e-9
# Smallest m tried when bracketing m*
M_LOWER_START = 1e-14
X_LOWER_START = -50.0


@dataclass(frozen=True)
class LinearSpreading:
    """Linear spreading speed and its minimizing decay rate"""

    s_lin: float
    gamma_lin: float


@dataclass(frozen=True)
class DecayPair:
    """
    Strong and weak decay rates solving s_env(γ) = p/q.

    ``degenerate`` marks a pair within the tip tolerance of s_lin, where both
    rates collapse onto gamma_lin.
    """

    gamma_s: float
    gamma_w: float
    gamma_lin: float
    degenerate: bool = False

    def require_regular(self) -> None:
        if self.degenerate:
            raise DegenerateConfigurationError(
                f"Decay rates coincide at gamma_lin={self.gamma_lin:.12g} (tongue tip)"
            )


@dataclass(frozen=True)
class CriticalMigration:
    """Tongue tip m*(r) for a speed, with a flag when it hits min(1, 2/r)"""

    m_star: float
    saturated: bool = False


def trinomial(gamma: Number, params: Params) -> Number:
    """a + bγ + aγ², the numerator of the dispersion relation."""
    a, b = params.a, params.b
    return a + gamma * (b + a * gamma)


def dispersion(gamma: Number, params: Params) -> Number:
    """
    Dispersion relation λ(γ) = (a + bγ + aγ²)/γ.

    Args:
        gamma: Decay rate, real or complex, nonzero
        params: Model parameters

    Returns:
        Growth factor λ per generation

    Raises:
        ParameterDomainError: If gamma is zero

    Examples:
        >>> dispersion(1.0, Params(1.1, 0.1))
        1.1
    """
    if gamma == 0:
        raise ParameterDomainError("Dispersion relation is undefined at gamma = 0")
    return trinomial(gamma, params) / gamma


def _check_open_unit(gamma: float) -> None:
    if not 0.0 < gamma < 1.0:
        raise ParameterDomainError(f"Decay rate must lie in (0, 1), got {gamma}")


def envelope_speed(gamma: float, params: Params) -> float:
    """
    Envelope velocity s_env(γ) = 1 - log(a + bγ + aγ²)/log γ.

    Args:
        gamma: Decay rate in (0, 1)
        params: Model parameters

    Returns:
        Speed of the exponential solution with decay rate gamma
    """
    _check_open_unit(gamma)
    return 1.0 - math.log(trinomial(gamma, params)) / math.log(gamma)


def envelope_speed_derivative(gamma: float, params: Params) -> float:
    """
    Analytic derivative of s_env with respect to γ.

    Args:
        gamma: Decay rate in (0, 1)
        params: Model parameters

    Returns:
        d s_env / dγ
    """
    _check_open_unit(gamma)
    a, b = params.a, params.b
    poly = trinomial(gamma, params)
    log_gamma = math.log(gamma)
    return (-(b + 2.0 * a * gamma) / (poly * log_gamma)
            + math.log(poly) / (gamma * log_gamma ** 2))


def _log_trinomial(x: float, params: Params) -> float:
    gamma = math.exp(x)
    return math.log(trinomial(gamma, params))


def _slope_sign(params: Params) -> Callable[[float], float]:
    """x² · d s_env/dx as a function of x = log γ; same sign as the slope."""
    a, b = params.a, params.b

    def sign_function(x: float) -> float:
        gamma = math.exp(x)
        poly = trinomial(gamma, params)
        return math.log(poly) - x * gamma * (b + 2.0 * a * gamma) / poly

    return sign_function


def _require_linear_regime(params: Params) -> None:
    params.require_front_regime()


def linear_spreading_speed(params: Params, tol: Tolerances = DEFAULT_TOLERANCES) -> LinearSpreading:
    """
    Minimize s_env over (0, 1).

    The minimizer is unique, so the sign change of the analytic slope is
    bracketed between a very small decay rate (slope negative since a < 1) and
    γ = 1 (slope positive since r > 1) and located by Brent's method.

    Args:
        params: Model parameters with 1 < r < 2/m
        tol: Tolerance set (uses ``bisection``)

    Returns:
        LinearSpreading(s_lin, gamma_lin)

    Raises:
        ParameterDomainError: If a ≥ 1 or m = 0
    """
    _require_linear_regime(params)
    sign_function = _slope_sign(params)

    x_lo = X_LOWER_START
    while sign_function(x_lo) >= 0.0:
        x_lo *= 2.0
        if x_lo < -1e4:
            raise ParameterDomainError(f"Could not bracket the s_env minimum for {params}")

    x_lin = brentq(sign_function, x_lo, 0.0, xtol=tol.bisection * 1e-2, rtol=4 * np.finfo(float).eps)
    gamma_lin = math.exp(x_lin)
    s_lin = 1.0 - _log_trinomial(x_lin, params) / x_lin
    logger.debug(f"s_lin={s_lin:.15g} at gamma_lin={gamma_lin:.15g} for r={params.r}, m={params.m}")
    return LinearSpreading(s_lin=s_lin, gamma_lin=gamma_lin)


def decay_rates_for_speed(params: Params, speed: RationalSpeed,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> DecayPair:
    """
    Solve s_env(γ) = p/q on both sides of gamma_lin.

    Equivalently γ^{q-p} = (a + bγ + aγ²)^q, which in x = log γ reads
    h(x) = q·log(a + bγ + aγ²) - (q-p)·x = 0.

    Args:
        params: Model parameters
        speed: Target speed p/q
        tol: Tolerance set (uses ``bisection`` and ``tip_degeneracy``)

    Returns:
        DecayPair; flagged degenerate when p/q is within tip tolerance of s_lin

    Raises:
        ParameterDomainError: If p/q lies below s_lin (beyond the tongue tip)
    """
    spreading = linear_spreading_speed(params, tol)
    gap = speed.value - spreading.s_lin
    if abs(gap) < tol.tip_degeneracy:
        logger.warning(f"Speed {speed} is within {tol.tip_degeneracy:g} of s_lin={spreading.s_lin:.12g}")
        return DecayPair(spreading.gamma_lin, spreading.gamma_lin, spreading.gamma_lin, degenerate=True)
    if gap < 0:
        raise ParameterDomainError(
            f"Speed {speed} = {speed.value:.6g} is below s_lin = {spreading.s_lin:.6g} "
            f"(r={params.r}, m={params.m}); no real decay pair"
        )

    q, n = speed.q, speed.n

    def h(x: float) -> float:
        return q * _log_trinomial(x, params) - n * x

    x_lin = math.log(spreading.gamma_lin)
    x_lo = min(x_lin - 1.0, 2.0 * q * math.log(params.a) / n - 1.0)
    xtol = tol.bisection * 1e-2
    rtol = 4 * np.finfo(float).eps
    x_s = brentq(h, x_lo, x_lin, xtol=xtol, rtol=rtol)
    x_w = brentq(h, x_lin, 0.0, xtol=xtol, rtol=rtol)
    pair = DecayPair(gamma_s=math.exp(x_s), gamma_w=math.exp(x_w), gamma_lin=spreading.gamma_lin)
    logger.debug(f"Decay rates for {speed}: gamma_s={pair.gamma_s:.15g}, gamma_w={pair.gamma_w:.15g}")
    return pair


def m_star(r: float, speed: RationalSpeed, tol: Tolerances = DEFAULT_TOLERANCES) -> CriticalMigration:
    """
    Tongue tip: the migration rate at which s_lin(r, m) = p/q.

    s_lin increases strictly in m, so the root is unique. When s_lin stays
    below p/q all the way to min(1, 2/r) the tip saturates there.

    Args:
        r: Growth factor (> 1)
        speed: Target speed
        tol: Tolerance set (uses ``bisection``)

    Returns:
        CriticalMigration(m_star, saturated)
    """
    if not r > 1.0:
        raise ParameterDomainError(f"r must be > 1, got {r}")
    m_limit = min(1.0, 2.0 / r)
    target = speed.value

    def excess(m: float) -> float:
        return linear_spreading_speed(Params(r, m), tol).s_lin - target

    m_hi = m_limit * (1.0 - M_UPPER_MARGIN)
    if excess(m_hi) <= 0.0:
        logger.info(f"m* for speed {speed} at r={r} saturates at {m_limit:.6g}")
        return CriticalMigration(m_star=m_limit, saturated=True)

    m_lo = M_LOWER_START
    while excess(m_lo) >= 0.0:
        m_lo /= 100.0
        if m_lo < 1e-300:
            raise ParameterDomainError(f"Could not bracket m* for speed {speed} at r={r}")

    root = brentq(excess, m_lo, m_hi, xtol=tol.bisection * m_lo, rtol=4 * np.finfo(float).eps)
    logger.debug(f"m* for speed {speed} at r={r}: {root:.15g}")
    return CriticalMigration(m_star=root, saturated=False)


def slin_m_derivative(params: Params, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """
    Analytic ds_lin/dm = -(γ-1)² / (log γ · (m(γ-1)² + 2γ)) at γ = gamma_lin.

    Args:
        params: Model parameters
        tol: Tolerance set

    Returns:
        Derivative of the linear spreading speed with respect to m (positive)
    """
    gamma = linear_spreading_speed(params, tol).gamma_lin
    gap = (gamma - 1.0) ** 2
    return -gap / (math.log(gamma) * (params.m * gap + 2.0 * gamma))
