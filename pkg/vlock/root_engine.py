# -*- coding: utf-8 -*-
"""
Characteristic roots of the locked front.

A speed-p/q front is assembled from exponentials γ^i whose decay rates solve
(a + bγ + aγ²)^q = λ·γ^N with N = q - p (λ = 1 for the front itself). The N
roots inside the closed disk of radius γ_s are selected, and each gets a
branch-consistent q-th inverse root ζ = γ^{ℓ1} / (a + bγ + aγ²)^{ℓ2} built
from integer powers only.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.linalg import companion

from .exceptions import DegenerateConfigurationError, ParameterDomainError, RootEngineError
from .linear_analysis import trinomial
from .parameters import Params, RationalSpeed
from .tolerances import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

NEWTON_MAX_ITER = 50
REAL_SNAP = 1e-12


@dataclass(frozen=True, eq=False)
class FrontRoots:
    """
    Selected construction roots for one (params, speed) pair.

    gammas[0] is the real strong-decay root γ_1 = γ_s; the rest follow in
    (modulus, argument) order. zetas[j] is the q-th inverse root of gammas[j].
    """

    gammas: np.ndarray
    zetas: np.ndarray
    ell1: int
    ell2: int
    gamma_s: float
    gamma_w: float
    modulus_gap: float

    @property
    def n(self) -> int:
        return len(self.gammas)


def characteristic_coefficients(params: Params, speed: RationalSpeed, lam: complex = 1.0) -> np.ndarray:
    """
    Ascending coefficients of (a + bγ + aγ²)^q - λγ^N.

    The trinomial power is expanded with exact integer multinomial
    coefficients: the γ^n coefficient collects q!/(i!j!k!)·a^{i+k}·b^j over
    i + j + k = q, j + 2k = n.

    Args:
        params: Model parameters
        speed: Target speed p/q
        lam: Spectral parameter λ (nonzero)

    Returns:
        Array of length 2q + 1, complex if lam is complex

    Examples:
        >>> coeffs = characteristic_coefficients(Params(1.2, 0.1), RationalSpeed(1, 2))
        >>> round(coeffs.sum(), 12) == round(1.2 ** 2 - 1, 12)
        True
    """
    q, n = speed.q, speed.n
    a, b = params.a, params.b
    coeffs = np.zeros(2 * q + 1, dtype=complex if isinstance(lam, complex) else float)
    for degree in range(2 * q + 1):
        total = 0.0
        for k in range(max(0, degree - q), degree // 2 + 1):
            j = degree - 2 * k
            i = q - j - k
            if i < 0:
                continue
            multinomial = math.comb(q, k) * math.comb(q - k, j)
            total += multinomial * a ** (i + k) * b ** j
        coeffs[degree] = total
    coeffs[n] -= lam
    return coeffs


Evaluator = Callable[[complex], Tuple[complex, complex]]


def _unexpanded_form(params: Params, speed: RationalSpeed, lam: complex) -> Evaluator:
    """f(γ) = P(γ)^q - λγ^N and f'(γ), without expanding the power."""
    q, n = speed.q, speed.n
    a, b = params.a, params.b

    def evaluate(gamma: complex) -> Tuple[complex, complex]:
        poly = trinomial(gamma, params)
        value = poly ** q - lam * gamma ** n
        slope = q * poly ** (q - 1) * (b + 2.0 * a * gamma) - lam * n * gamma ** (n - 1)
        return value, slope

    return evaluate


def _substituted_form(params: Params, speed: RationalSpeed, omega: complex) -> Evaluator:
    """h(z) = a + b·z^q + a·z^{2q} - ω·z^N and h'(z), with γ = z^q and ω^q = λ."""
    q, n = speed.q, speed.n
    a, b = params.a, params.b

    def evaluate(z: complex) -> Tuple[complex, complex]:
        zq = z ** q
        value = a + b * zq + a * zq * zq - omega * z ** n
        slope = q * b * z ** (q - 1) + 2 * q * a * z ** (2 * q - 1) - n * omega * z ** (n - 1)
        return value, slope

    return evaluate


def _guarded_newton(index: int, starts: np.ndarray, evaluate: Evaluator) -> complex:
    """
    Newton iteration from starts[index].

    A step is kept only when it lowers |f| and the iterate stays closer to
    its own start than to any other start, so neighbouring roots cannot be
    pulled onto each other.
    """
    x = complex(starts[index])
    try:
        value, slope = evaluate(x)
    except OverflowError:
        return x
    for _ in range(NEWTON_MAX_ITER):
        if value == 0 or slope == 0:
            break
        candidate = x - value / slope
        try:
            new_value, new_slope = evaluate(candidate)
        except OverflowError:
            break
        if not abs(new_value) < abs(value):
            break
        if len(starts) > 1 and int(np.argmin(np.abs(starts - candidate))) != index:
            break
        step = abs(candidate - x)
        x, value, slope = candidate, new_value, new_slope
        if step <= 4 * np.finfo(float).eps * max(abs(x), np.finfo(float).tiny):
            break
    return x


def _polish_all(starts: np.ndarray, evaluate: Evaluator) -> np.ndarray:
    return np.array([_guarded_newton(i, starts, evaluate) for i in range(len(starts))], dtype=complex)


def _relative_residual(gamma: complex, params: Params, speed: RationalSpeed, lam: complex) -> float:
    try:
        poly = trinomial(gamma, params)
        lhs = poly ** speed.q
        rhs = lam * gamma ** speed.n
    except OverflowError:
        return math.inf
    scale = abs(lhs) + abs(rhs)
    if not math.isfinite(scale):
        return math.inf
    return abs(lhs - rhs) / scale if scale > 0 else 0.0


def _worst_residual(roots: np.ndarray, params: Params, speed: RationalSpeed, lam: complex) -> float:
    return max(_relative_residual(z, params, speed, lam) for z in roots)


def merged_pairs(roots: Sequence[complex], separation: float) -> List[Tuple[int, int]]:
    """
    Index pairs of roots closer than separation·max(|γ_i|, |γ_j|).

    Args:
        roots: Complex roots
        separation: Relative distance below which two roots count as one

    Returns:
        List of (i, j) with i < j
    """
    values = np.asarray(roots, dtype=complex)
    pairs = []
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            scale = max(abs(values[i]), abs(values[j]))
            if abs(values[i] - values[j]) <= separation * scale:
                pairs.append((i, j))
    return pairs


def _expanded_roots(params: Params, speed: RationalSpeed, lam: complex) -> np.ndarray:
    coeffs = characteristic_coefficients(params, speed, lam)
    starts = np.linalg.eigvals(companion(coeffs[::-1]))
    return _polish_all(starts, _unexpanded_form(params, speed, lam))


def _substituted_roots(params: Params, speed: RationalSpeed, lam: complex) -> np.ndarray:
    """
    Roots through γ = z^q.

    z solves a + b·z^q + a·z^{2q} = ω·z^N for one fixed q-th root ω of λ;
    since gcd(q, N) = 1 the 2q values z^q are exactly the 2q roots in γ. The
    coefficients stay of order a, b and 1, where the expanded power spans
    a^q to b^q.
    """
    q, n = speed.q, speed.n
    omega = complex(lam) ** (1.0 / q)
    coeffs = np.zeros(2 * q + 1, dtype=complex)
    coeffs[0] = params.a
    coeffs[q] = params.b
    coeffs[2 * q] = params.a
    coeffs[n] -= omega
    z_starts = np.linalg.eigvals(companion(coeffs[::-1]))
    zs = _polish_all(z_starts, _substituted_form(params, speed, omega))
    return _polish_all(zs ** q, _unexpanded_form(params, speed, lam))


def char_roots(params: Params, speed: RationalSpeed, lam: complex = 1.0,
               tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    All 2q roots of (a + bγ + aγ²)^q - λγ^{q-p}.

    Eigenvalues of the companion matrix of the expanded polynomial give the
    starting values, polished by guarded Newton steps on the unexpanded form.
    When a root misses the residual tolerance or two roots have merged, the
    roots are recomputed through the substitution γ = z^q and checked again.

    Args:
        params: Model parameters (m > 0 so that the leading coefficient a^q is nonzero)
        speed: Target speed p/q
        lam: Spectral parameter λ ≠ 0 (1 for the front itself)
        tol: Tolerance set (uses ``root_residual`` and ``root_separation``)

    Returns:
        Complex array of 2q roots

    Raises:
        ParameterDomainError: If lam is zero or m = 0
        RootEngineError: If a polished root still misses the residual tolerance
    """
    if lam == 0:
        raise ParameterDomainError("Spectral parameter lambda must be nonzero")
    if params.m <= 0:
        raise ParameterDomainError("Characteristic polynomial needs m > 0 (leading coefficient a^q)")

    roots = _expanded_roots(params, speed, lam)
    worst = _worst_residual(roots, params, speed, lam)
    merged = merged_pairs(roots, tol.root_separation)
    if worst > tol.root_residual or merged:
        logger.debug(
            f"char_roots {speed} lam={lam}: companion roots rejected (residual {worst:.3e}, "
            f"{len(merged)} merged pairs); solving through gamma = z^q"
        )
        roots = _substituted_roots(params, speed, lam)
        worst = _worst_residual(roots, params, speed, lam)

    logger.debug(f"char_roots {speed} lam={lam}: worst relative residual {worst:.3e}")
    if worst > tol.root_residual:
        raise RootEngineError(
            f"Root residual {worst:.3e} exceeds {tol.root_residual:g} for speed {speed}, "
            f"r={params.r}, m={params.m}, lambda={lam}"
        )
    return roots


def diophantine(q: int, n: int) -> Tuple[int, int]:
    """
    Solve q·ℓ1 - N·ℓ2 = -1 with 0 ≤ ℓ1 < N.

    For N ≥ 2 the solution has 0 < ℓ1 < ℓ2. N = 1 gives (0, 1).

    Args:
        q: Denominator of the speed
        n: Number of construction roots N = q - p

    Returns:
        (ell1, ell2)

    Raises:
        ParameterDomainError: If gcd(q, N) ≠ 1 or N < 1

    Examples:
        >>> diophantine(8, 5)
        (3, 5)
    """
    if n < 1 or q < 1:
        raise ParameterDomainError(f"Need q, N ≥ 1, got q={q}, N={n}")
    if math.gcd(q, n) != 1:
        raise ParameterDomainError(f"q={q} and N={n} are not coprime")
    ell1 = (-pow(q, -1, n)) % n if n > 1 else 0
    ell2 = (q * ell1 + 1) // n
    return ell1, ell2


def fractional_root(gamma: complex, params: Params, ell1: int, ell2: int) -> complex:
    """
    ζ = γ^{ℓ1} · (a + bγ + aγ²)^{-ℓ2}, a q-th inverse root of a selected γ.

    Args:
        gamma: Selected front root
        params: Model parameters
        ell1: First Diophantine exponent
        ell2: Second Diophantine exponent

    Returns:
        ζ with ζ^q·γ = 1

    Raises:
        RootEngineError: If the trinomial vanishes at gamma
    """
    poly = trinomial(gamma, params)
    if poly == 0:
        raise RootEngineError(f"Trinomial vanishes at gamma={gamma}")
    return gamma ** ell1 / poly ** ell2


def _order_and_pair(selected: np.ndarray, tol: Tolerances) -> List[complex]:
    """Snap near-real roots, enforce exact conjugate pairs, order deterministically."""
    remaining = []
    for z in selected:
        if abs(z.imag) <= REAL_SNAP * abs(z):
            z = complex(z.real, 0.0)
        remaining.append(complex(z))

    reals = [z for z in remaining if z.imag == 0.0]
    uppers = [z for z in remaining if z.imag > 0.0]
    lowers = [z for z in remaining if z.imag < 0.0]
    if len(uppers) != len(lowers):
        raise RootEngineError(f"Unpaired non-real roots: {len(uppers)} above, {len(lowers)} below the axis")

    paired = list(reals)
    for z in uppers:
        distances = [abs(w - z.conjugate()) for w in lowers]
        best = int(np.argmin(distances))
        if distances[best] > tol.conjugate_pairing * abs(z):
            raise RootEngineError(f"Root {z} has no conjugate partner within {tol.conjugate_pairing:g}")
        partner = lowers.pop(best)
        mean = 0.5 * (z + partner.conjugate())
        paired.extend([mean, mean.conjugate()])

    return sorted(paired, key=lambda z: (abs(z), math.atan2(z.imag, z.real)))


def select_front_roots(all_roots: Sequence[complex], gamma_s: float, gamma_w: float,
                       params: Params, speed: RationalSpeed,
                       tol: Tolerances = DEFAULT_TOLERANCES) -> FrontRoots:
    """
    Keep the N = q - p smallest roots and attach their zetas.

    Args:
        all_roots: Output of char_roots at λ = 1
        gamma_s: Strong decay rate from the linear analysis
        gamma_w: Weak decay rate (carried for spectral weighting)
        params: Model parameters
        speed: Target speed
        tol: Tolerance set

    Returns:
        FrontRoots with gammas[0] = γ_s

    Raises:
        DegenerateConfigurationError: If the N-th and (N+1)-th moduli are tied
        RootEngineError: If roots inside the disk coincide, or the disk count,
            strong root or pairing check fails
    """
    n = speed.n
    roots = np.asarray(all_roots, dtype=complex)
    roots = roots[np.argsort(np.abs(roots), kind='stable')]
    moduli = np.abs(roots)

    inside = int(np.sum(moduli <= gamma_s * (1.0 + tol.modulus_count)))
    merged = merged_pairs(roots[:inside], tol.root_separation)
    if merged:
        raise RootEngineError(
            f"Roots {merged[0]} inside gamma_s={gamma_s:.12g} coincide; "
            f"the root set has merged duplicates (speed {speed}, r={params.r}, m={params.m})"
        )
    if inside != n:
        raise RootEngineError(
            f"Found {inside} roots with modulus ≤ gamma_s={gamma_s:.12g}, expected {n} "
            f"(speed {speed}, r={params.r}, m={params.m})"
        )
    modulus_gap = float(moduli[n] - moduli[n - 1]) if len(moduli) > n else math.inf
    if modulus_gap < tol.modulus_gap * gamma_s:
        raise DegenerateConfigurationError(
            f"Modulus gap {modulus_gap:.3e} between roots {n} and {n + 1} is below tolerance"
        )

    strongest = roots[n - 1]
    if abs(strongest.imag) > tol.strong_root_match * gamma_s or \
            abs(strongest.real - gamma_s) > tol.strong_root_match * gamma_s:
        raise RootEngineError(
            f"Largest selected root {strongest} does not match gamma_s={gamma_s:.12g}"
        )

    ordered = _order_and_pair(roots[:n - 1], tol) if n > 1 else []
    gammas = np.array([complex(strongest.real, 0.0)] + ordered, dtype=complex)

    ell1, ell2 = diophantine(speed.q, n)
    if n == 1:
        zetas = np.array([gammas[0].real ** (-1.0 / speed.q)], dtype=complex)
    else:
        zetas = np.array([fractional_root(g, params, ell1, ell2) for g in gammas], dtype=complex)
        zetas[0] = complex(zetas[0].real, 0.0)

    logger.debug(f"Selected roots for {speed}: {gammas}, modulus gap {modulus_gap:.3e}")
    return FrontRoots(gammas=gammas, zetas=zetas, ell1=ell1, ell2=ell2,
                      gamma_s=float(gamma_s), gamma_w=float(gamma_w), modulus_gap=modulus_gap)
