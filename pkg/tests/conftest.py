# -*- coding: utf-8 -*-
"""
Pytest configuration and shared fixtures for testing
"""

import math
from typing import List, Tuple

import numpy as np
import pytest

from vlock.front_builder import build_front
from vlock.linear_analysis import m_star
from vlock.locking_regions import c_bounds
from vlock.parameters import Params, RationalSpeed, SimConfig

# Growth factor of the front-construction checks
FRONT_R = 1.3


def interior_params(r: float, speed: RationalSpeed) -> Params:
    """(r, m*/2) with c at the band midpoint, clipped to r·c ≤ 1."""
    m = 0.5 * m_star(r, speed).m_star
    bounds = c_bounds(Params(r, m), speed)
    c = min(0.5 * (bounds.c_min + bounds.c_max), 1.0 / r)
    return Params(r, m, c)


def random_draws(count: int, seed: int, max_n: int = 19) -> List[Tuple[Params, RationalSpeed]]:
    """Random (r, m, p/q) with q ≤ 20, N ≤ max_n, r in [1.05, 1.8] and m in [0.05, 0.95]·m*."""
    rng = np.random.default_rng(seed)
    draws = []
    while len(draws) < count:
        q = int(rng.integers(2, 21))
        numerators = [p for p in range(1, q) if math.gcd(p, q) == 1 and q - p <= max_n]
        if not numerators:
            continue
        speed = RationalSpeed(int(rng.choice(numerators)), q)
        r = float(rng.uniform(1.05, 1.8))
        m = float(rng.uniform(0.05, 0.95)) * m_star(r, speed).m_star
        draws.append((Params(r, m), speed))
    return draws


@pytest.fixture(params=[(1, 2), (1, 3), (2, 5), (3, 8)], ids=lambda pq: f"{pq[0]}_{pq[1]}")
def speed(request):
    """The four speeds of the front checks"""
    return RationalSpeed(*request.param)


@pytest.fixture
def interior(speed):
    """Interior (r, m, c) for the parametrized speed at r = 1.3"""
    return interior_params(FRONT_R, speed)


@pytest.fixture
def front(interior, speed):
    """Constructed front at interior parameters"""
    return build_front(interior, speed)


@pytest.fixture
def one_third():
    return RationalSpeed(1, 3)


@pytest.fixture
def one_half():
    return RationalSpeed(1, 2)


@pytest.fixture
def small_sim():
    """Short simulation settings for fast tests"""
    return SimConfig(lattice_size=120, transient_generations=600, measure_generations=600)


@pytest.fixture
def out_dir(tmp_path):
    """Temporary output directory"""
    path = tmp_path / 'outputs'
    path.mkdir()
    return path
