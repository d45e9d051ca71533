# -*- coding: utf-8 -*-
"""
Tests for linear_analysis.py - dispersion, spreading speed and decay rates
"""

import math

import numpy as np
import pytest

from vlock.exceptions import DegenerateConfigurationError, ParameterDomainError
from vlock.linear_analysis import (
    DecayPair,
    decay_rates_for_speed,
    dispersion,
    envelope_speed,
    envelope_speed_derivative,
    linear_spreading_speed,
    m_star,
    slin_m_derivative,
    trinomial,
)
from vlock.parameters import Params, RationalSpeed


class TestDispersion:
    """Test the dispersion relation"""

    def test_unit_decay_gives_r(self):
        assert dispersion(1.0, Params(1.1, 0.1)) == pytest.approx(1.1)

    def test_hand_value(self):
        assert dispersion(0.5, Params(1.1, 0.1)) == pytest.approx(1.1275)

    @pytest.mark.parametrize("gamma", [0.3, 2.0, -0.7, 0.2 + 0.5j])
    def test_reciprocal_symmetry(self, gamma):
        params = Params(1.4, 0.3)
        assert dispersion(gamma, params) == pytest.approx(dispersion(1.0 / gamma, params))

    def test_zero_rejected(self):
        with pytest.raises(ParameterDomainError):
            dispersion(0.0, Params(1.1, 0.1))


class TestEnvelopeSpeed:
    """Test the envelope velocity"""

    def test_small_decay_limit(self):
        assert envelope_speed(1e-200, Params(1.1, 0.1)) == pytest.approx(1.0, abs=0.02)

    def test_open_interval(self):
        with pytest.raises(ParameterDomainError):
            envelope_speed(1.0, Params(1.1, 0.1))

    def test_derivative_matches_difference_quotient(self):
        params, gamma, h = Params(1.2, 0.2), 0.4, 1e-6
        numeric = (envelope_speed(gamma + h, params) - envelope_speed(gamma - h, params)) / (2 * h)
        assert envelope_speed_derivative(gamma, params) == pytest.approx(numeric, rel=1e-6)


class TestLinearSpreadingSpeed:
    """Test the minimum of the envelope velocity"""

    def test_reference_value(self):
        result = linear_spreading_speed(Params(1.1, 0.1))
        assert result.s_lin == pytest.approx(0.1443, abs=5e-4)
        assert envelope_speed(result.gamma_lin, Params(1.1, 0.1)) == pytest.approx(result.s_lin, abs=1e-14)

    def test_is_minimum(self):
        params = Params(1.3, 0.2)
        result = linear_spreading_speed(params)
        grid = np.linspace(0.01, 0.99, 99)
        assert all(envelope_speed(g, params) >= result.s_lin - 1e-12 for g in grid)
        assert envelope_speed_derivative(result.gamma_lin, params) == pytest.approx(0.0, abs=1e-7)

    def test_increasing_in_m(self):
        speeds = [linear_spreading_speed(Params(1.1, m)).s_lin for m in np.linspace(0.01, 0.9, 20)]
        assert all(b > a for a, b in zip(speeds, speeds[1:]))

    def test_vanishes_with_m(self):
        assert linear_spreading_speed(Params(1.1, 1e-8)).s_lin < 0.05

    def test_m_derivative(self):
        h = 1e-6
        numeric = (linear_spreading_speed(Params(1.2, 0.2 + h)).s_lin
                   - linear_spreading_speed(Params(1.2, 0.2 - h)).s_lin) / (2 * h)
        analytic = slin_m_derivative(Params(1.2, 0.2))
        assert analytic > 0
        assert analytic == pytest.approx(numeric, rel=1e-5)

    def test_needs_migration(self):
        with pytest.raises(ParameterDomainError):
            linear_spreading_speed(Params(1.1, 0.0))


class TestDecayRates:
    """Test the strong and weak decay rates"""

    def test_both_rates_hit_speed(self):
        speed = RationalSpeed(1, 3)
        params = Params(1.3, 0.5 * m_star(1.3, speed).m_star)
        pair = decay_rates_for_speed(params, speed)
        assert 0 < pair.gamma_s < pair.gamma_lin < pair.gamma_w < 1
        assert envelope_speed(pair.gamma_s, params) == pytest.approx(1 / 3, abs=1e-10)
        assert envelope_speed(pair.gamma_w, params) == pytest.approx(1 / 3, abs=1e-10)

    def test_strong_rate_solves_polynomial(self):
        speed = RationalSpeed(2, 5)
        params = Params(1.3, 0.5 * m_star(1.3, speed).m_star)
        gamma = decay_rates_for_speed(params, speed).gamma_s
        lhs = trinomial(gamma, params) ** speed.q
        rhs = gamma ** speed.n
        assert abs(lhs - rhs) <= 1e-10 * rhs

    def test_speed_below_slin(self):
        with pytest.raises(ParameterDomainError):
            decay_rates_for_speed(Params(1.1, 0.9), RationalSpeed(1, 20))

    def test_degenerate_pair(self):
        pair = DecayPair(0.3, 0.3, 0.3, degenerate=True)
        with pytest.raises(DegenerateConfigurationError):
            pair.require_regular()


class TestCriticalMigration:
    """Test the tongue tip m*"""

    def test_brackets_speed(self):
        speed = RationalSpeed(1, 3)
        tip = m_star(1.2, speed)
        assert not tip.saturated
        eps = 1e-6 * tip.m_star
        assert linear_spreading_speed(Params(1.2, tip.m_star - eps)).s_lin < 1 / 3
        assert linear_spreading_speed(Params(1.2, tip.m_star + eps)).s_lin > 1 / 3

    def test_increasing_in_speed(self):
        tips = [m_star(1.2, RationalSpeed(p, q)).m_star for p, q in [(1, 4), (1, 3), (2, 5), (1, 2)]]
        assert all(b > a for a, b in zip(tips, tips[1:]))

    def test_tip_within_limit(self):
        tip = m_star(1.5, RationalSpeed(1, 2))
        assert 0 < tip.m_star <= min(1.0, 2.0 / 1.5)
        assert math.isfinite(tip.m_star)
