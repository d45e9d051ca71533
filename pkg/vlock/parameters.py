# -*- coding: utf-8 -*-
"""
Parameter records for the invasion model and the enumeration of rational speeds.

The model is u_{i,t+1} = g((m/2)u_{i-1,t} + (1-m)u_{i,t} + (m/2)u_{i+1,t}) with
g(u) = r·u below the critical density c and g(u) = 1 at or above it.
"""

import math
from dataclasses import asdict, dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import pandas as pd

from .exceptions import ParameterDomainError

# Slack on r·c ≤ 1 so that c = 1/r survives rounding
RC_SLACK = 1e-12

# Simulation defaults
DEFAULT_LATTICE_SIZE = 400
DEFAULT_TRANSIENT_GENERATIONS = 10000
DEFAULT_MEASURE_GENERATIONS = 10000
DEFAULT_CAPACITY_SEED_WIDTH = 3
DEFAULT_SHIFT_TRIGGER_SITE = 3
MIN_LATTICE_SIZE = 50


@dataclass(frozen=True)
class Params:
    """
    Model parameters (r, m, c) with the shorthands a = rm/2 and b = r(1-m).

    ``c`` may be None for operations that do not depend on the threshold
    (linear analysis, roots, locking boundaries). ``m = 0`` is accepted so that
    migration-free simulations can be expressed; front construction requires
    m > 0 through :meth:`require_front_regime`.
    """

    r: float
    m: float
    c: Optional[float] = None

    def __post_init__(self):
        errors = validate_params(self.r, self.m, self.c)
        if errors:
            raise ParameterDomainError("; ".join(errors))

    @property
    def a(self) -> float:
        return self.r * self.m / 2.0

    @property
    def b(self) -> float:
        return self.r * (1.0 - self.m)

    def with_c(self, c: Optional[float]) -> "Params":
        return Params(self.r, self.m, c)

    def with_m(self, m: float) -> "Params":
        return Params(self.r, m, self.c)

    def require_c(self) -> float:
        """
        Return c, failing when the threshold was not supplied.

        Raises:
            ParameterDomainError: If c is None
        """
        if self.c is None:
            raise ParameterDomainError("This operation needs the critical density c")
        return self.c

    def require_front_regime(self) -> None:
        """
        Check the extra conditions for front construction: m > 0 and a < 1.

        Raises:
            ParameterDomainError: If r·m ≥ 2 or m = 0
        """
        if self.m <= 0.0:
            raise ParameterDomainError(f"Front construction needs m > 0, got m={self.m}")
        if self.a >= 1.0:
            raise ParameterDomainError(
                f"Front construction needs a = rm/2 < 1, got a={self.a:.6g} (r={self.r}, m={self.m})"
            )

    def to_dict(self) -> Dict[str, Optional[float]]:
        return asdict(self)


def validate_params(r: float, m: float, c: Optional[float]) -> List[str]:
    """
    Validate a parameter triple.

    Args:
        r: Growth factor per generation
        m: Migration proportion
        c: Critical density, or None

    Returns:
        List of error messages (empty if valid)
    """
    errors = []
    if not (isinstance(r, (int, float)) and math.isfinite(r) and r > 1.0):
        errors.append(f"r must be a finite number > 1, got {r}")
    if not (isinstance(m, (int, float)) and math.isfinite(m) and 0.0 <= m < 1.0):
        errors.append(f"m must lie in [0, 1), got {m}")
    if c is not None:
        if not (isinstance(c, (int, float)) and math.isfinite(c) and 0.0 < c <= 1.0):
            errors.append(f"c must lie in (0, 1], got {c}")
        elif not errors and r * c > 1.0 + RC_SLACK:
            errors.append(f"r·c must not exceed 1, got r·c = {r * c:.12g}")
    return errors


@dataclass(frozen=True)
class RationalSpeed:
    """Coprime pair (p, q) naming the front speed p/q with 0 < p/q < 1"""

    p: int
    q: int

    def __post_init__(self):
        if not (isinstance(self.p, int) and isinstance(self.q, int)):
            raise ParameterDomainError(f"p and q must be integers, got p={self.p!r}, q={self.q!r}")
        if not 1 <= self.p < self.q:
            raise ParameterDomainError(f"Speed needs 1 ≤ p < q, got {self.p}/{self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise ParameterDomainError(f"p and q must be coprime, got {self.p}/{self.q}")

    @property
    def n(self) -> int:
        """Number of construction roots N = q - p"""
        return self.q - self.p

    @property
    def value(self) -> float:
        return self.p / self.q

    @property
    def label(self) -> str:
        return f"{self.p}_{self.q}"

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    @classmethod
    def parse(cls, text: str) -> "RationalSpeed":
        """Parse '2/5' into RationalSpeed(2, 5)."""
        try:
            p_text, q_text = text.split('/')
            return cls(int(p_text), int(q_text))
        except ValueError as e:
            raise ParameterDomainError(f"Cannot parse speed '{text}': {e}") from e


@dataclass(frozen=True)
class SimConfig:
    """Domain-shifting simulation settings"""

    lattice_size: int = DEFAULT_LATTICE_SIZE
    transient_generations: int = DEFAULT_TRANSIENT_GENERATIONS
    measure_generations: int = DEFAULT_MEASURE_GENERATIONS
    capacity_seed_width: int = DEFAULT_CAPACITY_SEED_WIDTH
    shift_trigger_site: int = DEFAULT_SHIFT_TRIGGER_SITE

    def __post_init__(self):
        errors = []
        if self.lattice_size < MIN_LATTICE_SIZE:
            errors.append(f"lattice_size must be ≥ {MIN_LATTICE_SIZE}, got {self.lattice_size}")
        if self.transient_generations < 0:
            errors.append(f"transient_generations must be ≥ 0, got {self.transient_generations}")
        if self.measure_generations < 1:
            errors.append(f"measure_generations must be ≥ 1, got {self.measure_generations}")
        if not 1 <= self.capacity_seed_width < self.lattice_size:
            errors.append(f"capacity_seed_width must lie in [1, lattice_size), got {self.capacity_seed_width}")
        if not self.capacity_seed_width <= self.shift_trigger_site < self.lattice_size - 1:
            errors.append(
                f"shift_trigger_site must lie in [capacity_seed_width, lattice_size - 1), "
                f"got {self.shift_trigger_site}"
            )
        if errors:
            raise ParameterDomainError("; ".join(errors))

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


# ==============================================================================
# RATIONAL SPEED ENUMERATION
# ==============================================================================

def farey_sequence(order: int) -> Iterator[Tuple[int, int]]:
    """
    Yield the Farey sequence of the given order as (numerator, denominator).

    Args:
        order: Largest denominator

    Yields:
        Reduced fractions from 0/1 to 1/1 in increasing order
    """
    a, b, c, d = 0, 1, 1, order
    yield a, b
    while c <= order:
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        yield a, b


def coprime_speeds(q_max: int) -> List[RationalSpeed]:
    """
    All speeds p/q with 1 ≤ p < q ≤ q_max in increasing order.

    Args:
        q_max: Largest denominator (≥ 2)

    Returns:
        List of RationalSpeed in Farey order

    Raises:
        ParameterDomainError: If q_max < 2

    Examples:
        >>> [str(s) for s in coprime_speeds(3)]
        ['1/3', '1/2', '2/3']
    """
    if q_max < 2:
        raise ParameterDomainError(f"q_max must be ≥ 2, got {q_max}")
    return [RationalSpeed(p, q) for p, q in farey_sequence(q_max) if 0 < p < q]


def speeds_table(q_max: int) -> pd.DataFrame:
    """
    Tabulate the enumerated speeds with their band file names.

    Args:
        q_max: Largest denominator

    Returns:
        DataFrame with columns p, q, N, speed, band_file
    """
    rows = []
    for speed in coprime_speeds(q_max):
        rows.append({
            'p': speed.p,
            'q': speed.q,
            'N': speed.n,
            'speed': speed.value,
            'band_file': f"band_{speed.label}.csv"
        })
    return pd.DataFrame(rows)
