# -*- coding: utf-8 -*-
"""
Locked front construction.

Given the selected roots γ_j and their zetas ζ_j, the coefficients k_j solve
the Vandermonde system Σ_j k_j ζ_j^e = 1 (e = 0 … N-1). The front is
φ_i = 1 for i ≤ 0 and φ_i = Σ_j k_j γ_j^i for i ≥ 1, and the sums
Γ_n = Σ_j k_j ζ_j^{-n} describe every intermediate generation of the locked
orbit: u_{i,t} = min{1, Γ_{qi-pt}}.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exceptions import DegenerateConfigurationError, FrontConstructionError, ParameterDomainError
from .linear_analysis import decay_rates_for_speed
from .model import locked_map
from .parameters import Params, RationalSpeed
from .root_engine import FrontRoots, char_roots, select_front_roots
from .tolerances import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

# Window defaults
MIN_RIGHT_WINDOW = 40
RIGHT_WINDOW_PER_Q = 4
LEFT_WINDOW_EXTRA = 2

# Vandermonde condition numbers are reported above this N
CONDITION_REPORT_N = 8
CERTIFICATE_MAX_SITES = 100000


@dataclass(frozen=True, eq=False)
class CoefficientCheck:
    """Product-formula coefficients next to the linear-solve cross-check"""

    product: np.ndarray
    solved: np.ndarray
    disagreement: float
    condition: float
    min_separation: float


@dataclass(frozen=True, eq=False)
class FrontProfile:
    """
    A constructed speed-p/q front.

    ``phi`` holds φ_i for i = -left … right (``sites``). ``gamma_sums`` holds
    Γ_n for n = 0 … n_max with the imaginary parts discarded after checking.
    """

    params: Params
    speed: RationalSpeed
    roots: FrontRoots
    ks: np.ndarray
    left: int
    right: int
    phi: np.ndarray
    gamma_sums: np.ndarray
    coefficient_sum_error: float
    max_imag_residue: float

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.left, self.right + 1)

    @property
    def n_max(self) -> int:
        return len(self.gamma_sums) - 1

    def gamma(self, n: int) -> float:
        """Γ_n, from the stored table when available."""
        if 0 <= n <= self.n_max:
            return float(self.gamma_sums[n])
        return gamma_sum(self, n)


# ==============================================================================
# COEFFICIENTS
# ==============================================================================

def _min_separation(nodes: np.ndarray) -> float:
    if len(nodes) < 2:
        return np.inf
    diffs = np.abs(nodes[:, None] - nodes[None, :])
    diffs[np.diag_indices(len(nodes))] = np.inf
    return float(diffs.min())


def product_coefficients(zetas: Sequence[complex]) -> np.ndarray:
    """k_j = Π_{n≠j} (ζ_n - 1)/(ζ_n - ζ_j); k = [1] when N = 1."""
    nodes = np.asarray(zetas, dtype=complex)
    ks = np.ones(len(nodes), dtype=complex)
    for j in range(len(nodes)):
        others = np.delete(nodes, j)
        ks[j] = np.prod((others - 1.0) / (others - nodes[j]))
    return ks


def vandermonde_coefficients(zetas: Sequence[complex]) -> np.ndarray:
    """
    Solve Σ_j k_j ζ_j^e = 1, e = 0 … N-1, by a row-equilibrated linear solve.

    Row e is divided by ρ^e with ρ the geometric mean of |ζ_j|, which keeps
    the scaled nodes near the unit circle.

    Args:
        zetas: Distinct nodes ζ_j

    Returns:
        Coefficient vector k
    """
    nodes = np.asarray(zetas, dtype=complex)
    matrix, rhs = _scaled_vandermonde(nodes)
    return np.linalg.solve(matrix, rhs)


def _scaled_vandermonde(nodes: np.ndarray):
    rho = float(np.exp(np.mean(np.log(np.abs(nodes)))))
    exponents = np.arange(len(nodes))
    matrix = np.vander(nodes / rho, len(nodes), increasing=True).T
    rhs = rho ** (-exponents.astype(float))
    return matrix, rhs.astype(complex)


def check_coefficients(zetas: Sequence[complex],
                       tol: Tolerances = DEFAULT_TOLERANCES) -> CoefficientCheck:
    """
    Compute k_j both ways and measure their agreement.

    Args:
        zetas: Nodes ζ_j
        tol: Tolerance set (uses ``zeta_separation``)

    Returns:
        CoefficientCheck

    Raises:
        DegenerateConfigurationError: If two zetas nearly coincide
    """
    nodes = np.asarray(zetas, dtype=complex)
    separation = _min_separation(nodes)
    if separation <= tol.zeta_separation:
        raise DegenerateConfigurationError(
            f"Zetas nearly coincide (min pairwise distance {separation:.3e}); Vandermonde system is singular"
        )
    product = product_coefficients(nodes)
    solved = vandermonde_coefficients(nodes)
    disagreement = float(np.max(np.abs(product - solved)) / np.max(np.abs(product)))
    condition = float(np.linalg.cond(_scaled_vandermonde(nodes)[0]))
    return CoefficientCheck(product=product, solved=solved, disagreement=disagreement,
                            condition=condition, min_separation=separation)


def solve_coefficients(roots: FrontRoots, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Coefficients k_j of the front from the product formula.

    The linear solve serves as a cross-check; the product-formula values are
    returned only when both agree within ``vandermonde_agreement``.

    Args:
        roots: Selected front roots
        tol: Tolerance set

    Returns:
        Complex array of N coefficients

    Raises:
        DegenerateConfigurationError: If two zetas nearly coincide
        FrontConstructionError: If the two computations disagree
    """
    check = check_coefficients(roots.zetas, tol)
    if roots.n > CONDITION_REPORT_N:
        logger.info(f"Vandermonde condition number {check.condition:.3e} for N={roots.n}")
    if check.disagreement > tol.vandermonde_agreement:
        raise FrontConstructionError(
            f"Product formula and Vandermonde solve differ by {check.disagreement:.3e} "
            f"(condition {check.condition:.3e}, min zeta separation {check.min_separation:.3e}, N={roots.n})"
        )
    return check.product


# ==============================================================================
# GAMMA SUMS
# ==============================================================================

def _gamma_table(zetas: np.ndarray, ks: np.ndarray, n_max: int, tol: Tolerances):
    """Γ_0 … Γ_{n_max} through integer powers of 1/ζ_j."""
    inverse = 1.0 / zetas
    powers = np.ones((n_max + 1, len(zetas)), dtype=complex)
    if n_max > 0:
        powers[1:] = np.cumprod(np.tile(inverse, (n_max, 1)), axis=0)
    sums = powers @ ks
    scale = np.maximum(1.0, np.abs(powers) @ np.abs(ks))
    residue = np.abs(sums.imag) / scale
    worst = float(residue.max())
    if worst > tol.imag_residue:
        n_bad = int(np.argmax(residue))
        raise FrontConstructionError(
            f"Imaginary residue {worst:.3e} in Gamma_{n_bad} exceeds {tol.imag_residue:g}"
        )
    return sums.real.copy(), worst


def gamma_sum(profile: FrontProfile, n: int, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """
    Γ_n = Re Σ_j k_j ζ_j^{-n} for any n ≥ 0.

    Args:
        profile: Constructed front
        n: Index (≥ 0)
        tol: Tolerance set (uses ``imag_residue``)

    Returns:
        Real value of the sum

    Raises:
        ParameterDomainError: If n is negative
        FrontConstructionError: If the imaginary part exceeds tolerance
    """
    if n < 0:
        raise ParameterDomainError(f"Gamma index must be ≥ 0, got {n}")
    terms = profile.ks * (1.0 / profile.roots.zetas) ** n
    total = terms.sum()
    scale = max(1.0, float(np.abs(terms).sum()))
    if abs(total.imag) > tol.imag_residue * scale:
        raise FrontConstructionError(f"Imaginary residue {abs(total.imag):.3e} in Gamma_{n}")
    return float(total.real)


def tail_value(profile: FrontProfile, i: int) -> float:
    """Analytic front value Re Σ_j k_j γ_j^i at site i ≥ 1."""
    return float((profile.ks * profile.roots.gammas ** i).sum().real)


def _scaled_profile(roots: FrontRoots, ks: np.ndarray, count: int) -> np.ndarray:
    """ψ_i = Re Σ_j k_j (γ_j/γ_1)^i for i = 1 … count; same sign as φ_i, no underflow."""
    ratios = roots.gammas / roots.gammas[0].real
    powers = np.cumprod(np.tile(ratios, (count, 1)), axis=0)
    return (powers @ ks).real


# ==============================================================================
# CONSTRUCTION
# ==============================================================================

def build_front(params: Params, speed: RationalSpeed, tol: Tolerances = DEFAULT_TOLERANCES,
                right_window: Optional[int] = None) -> FrontProfile:
    """
    Construct the speed-p/q front and verify its invariants.

    Pipeline: decay rates, characteristic roots, selection and zetas,
    coefficients, Γ table, window profile, positivity on the window.

    Args:
        params: Model parameters (c is recorded but not needed)
        speed: Target speed p/q
        tol: Tolerance set
        right_window: Number of sites right of the interface (default max(40, 4q))

    Returns:
        FrontProfile

    Raises:
        DegenerateConfigurationError: At or too near the tongue tip
        FrontConstructionError: If the coefficient cross-check, normalization,
            realness or positivity fails
    """
    params.require_front_regime()
    q = speed.q

    pair = decay_rates_for_speed(params, speed, tol)
    pair.require_regular()
    roots = select_front_roots(char_roots(params, speed, 1.0, tol), pair.gamma_s, pair.gamma_w,
                               params, speed, tol)
    ks = solve_coefficients(roots, tol)

    sum_error = float(abs(ks.sum() - 1.0))
    if sum_error > tol.coefficient_sum:
        raise FrontConstructionError(
            f"Coefficient sum deviates from 1 by {sum_error:.3e} (speed {speed}, m={params.m})"
        )

    left = q + LEFT_WINDOW_EXTRA
    right = right_window if right_window is not None else max(MIN_RIGHT_WINDOW, RIGHT_WINDOW_PER_Q * q)
    n_max = 2 * q + q * right
    gamma_sums, imag_residue = _gamma_table(roots.zetas, ks, n_max, tol)

    phi = np.ones(left + right + 1)
    phi[left + 1:] = gamma_sums[q * np.arange(1, right + 1)]

    scaled = _scaled_profile(roots, ks, right)
    if np.any(scaled <= 0.0):
        site = int(np.argmax(scaled <= 0.0)) + 1
        raise FrontConstructionError(f"Front is not positive at site {site} (speed {speed}, m={params.m})")
    if np.any(phi[left + 1:] >= 1.0):
        site = int(np.argmax(phi[left + 1:] >= 1.0)) + 1
        raise FrontConstructionError(f"Front reaches capacity ahead of the interface at site {site}")

    logger.debug(f"Built front {speed} at r={params.r}, m={params.m}: k={ks}, sum error {sum_error:.2e}")
    return FrontProfile(params=params, speed=speed, roots=roots, ks=ks, left=left, right=right,
                        phi=phi, gamma_sums=gamma_sums, coefficient_sum_error=sum_error,
                        max_imag_residue=imag_residue)


def generation_profiles(profile: FrontProfile) -> np.ndarray:
    """
    Intermediate generations of the locked orbit on the profile window.

    Args:
        profile: Constructed front

    Returns:
        Array of shape (q, window) with row t holding u_{i,t} = min{1, Γ_{qi-pt}}
    """
    p, q = profile.speed.p, profile.speed.q
    sites = profile.sites
    rows = np.ones((q, len(sites)))
    for t in range(q):
        index = q * sites - p * t
        ahead = index > 0
        rows[t, ahead] = profile.gamma_sums[index[ahead]]
    return rows


def state_residual(state: Sequence[float], params: Params, speed: RationalSpeed,
                   left: float, right) -> float:
    """
    Sup-norm distance between F(u) and u, excluding the p-site right margin.

    Args:
        state: Window densities
        params: Model parameters including c
        speed: Target speed
        left: Left clamp
        right: Right clamp (scalar or q per-generation values)

    Returns:
        max_i |F(u)_i - u_i| over the interior
    """
    u = np.asarray(state, dtype=float)
    mapped = locked_map(u, params, speed, left, right)
    p = speed.p
    return float(np.max(np.abs(mapped[:-p] - u[:-p])))


def fixed_point_residual(profile: FrontProfile, params: Params, speed: RationalSpeed) -> float:
    """
    Residual of the front under F = S^p ∘ G^q with analytic right clamps.

    The site just right of the window takes its exact orbit value
    min{1, Γ_{q(R+1)-pt}} in generation t, so the only error left is rounding
    and any threshold decision the front violates.

    Args:
        profile: Constructed front
        params: Parameters whose c is tested (r and m must match the profile)
        speed: Target speed (must match the profile)

    Returns:
        Sup-norm residual over the interior of the window

    Raises:
        ParameterDomainError: If params or speed disagree with the profile
    """
    if speed != profile.speed:
        raise ParameterDomainError(f"Profile was built for {profile.speed}, not {speed}")
    if (params.r, params.m) != (profile.params.r, profile.params.m):
        raise ParameterDomainError("Profile was built for different (r, m)")
    p, q = speed.p, speed.q
    edge = q * (profile.right + 1)
    clamps = [min(1.0, profile.gamma(edge - p * t)) for t in range(q)]
    return state_residual(profile.phi, params, speed, 1.0, clamps)


# ==============================================================================
# POSITIVITY
# ==============================================================================

@dataclass(frozen=True)
class PositivityCertificate:
    """
    Outcome of the positivity check.

    ``tail_certified`` is False when no strict modulus gap exists and only the
    window was checked.
    """

    positive: bool
    i_star: int
    tail_certified: bool = True


def positivity_certificate(profile: FrontProfile,
                           max_sites: int = CERTIFICATE_MAX_SITES) -> PositivityCertificate:
    """
    Certify φ_i > 0 for all i ≥ 1.

    Beyond i_star the dominant term k_1 γ_1^i outweighs Σ_{j≥2} |k_j||γ_j|^i,
    so only sites 1 … i_star need explicit checking.

    Args:
        profile: Constructed front
        max_sites: Upper limit for the i_star search

    Returns:
        PositivityCertificate
    """
    roots, ks = profile.roots, profile.ks
    lead = float(ks[0].real)
    ratios = np.abs(roots.gammas[1:]) / roots.gammas[0].real
    weights = np.abs(ks[1:])

    if roots.n == 1:
        return PositivityCertificate(positive=lead > 0, i_star=1)

    if lead <= 0 or np.any(ratios >= 1.0):
        logger.warning(f"No strict dominance for {profile.speed}; checking the window only")
        scaled = _scaled_profile(roots, ks, profile.right)
        return PositivityCertificate(positive=bool(np.all(scaled > 0)), i_star=profile.right,
                                     tail_certified=False)

    bound = weights.copy()
    i_star = 0
    for i in range(1, max_sites + 1):
        bound = bound * ratios
        if bound.sum() < lead:
            i_star = i
            break
    if i_star == 0:
        logger.warning(f"Dominance bound not reached within {max_sites} sites for {profile.speed}")
        scaled = _scaled_profile(roots, ks, profile.right)
        return PositivityCertificate(positive=bool(np.all(scaled > 0)), i_star=profile.right,
                                     tail_certified=False)

    scaled = _scaled_profile(roots, ks, i_star)
    positive = bool(np.all(scaled > 0))
    logger.debug(f"Positivity certificate for {profile.speed}: i_star={i_star}, positive={positive}")
    return PositivityCertificate(positive=positive, i_star=i_star)
