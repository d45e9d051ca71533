# -*- coding: utf-8 -*-
"""
Tests for lattice_sim.py - domain-shifting simulation and speed classification
"""

from fractions import Fraction

import numpy as np
import pytest

from tests.conftest import FRONT_R, interior_params
from vlock.exceptions import BoundaryReachedError, ParameterDomainError
from vlock.lattice_sim import (
    SpeedMeasurement,
    classify_speed,
    count_resolution,
    find_plateaus,
    run_speed_sweep,
    simulate_speed,
)
from vlock.parameters import Params, RationalSpeed, SimConfig


class TestSpeedMeasurement:
    """Test the measured speed and its classification"""

    def test_fraction(self):
        meas = SpeedMeasurement(shift_count=4000, generations=10000)
        assert meas.measured_speed == 0.4
        assert meas.as_fraction == Fraction(2, 5)

    def test_classify_exact(self):
        assert classify_speed(SpeedMeasurement(4000, 10000), RationalSpeed(2, 5))

    def test_classify_one_off(self):
        assert not classify_speed(SpeedMeasurement(4001, 10000), RationalSpeed(2, 5))
        assert not classify_speed(SpeedMeasurement(4001, 10000), RationalSpeed(2, 5), tol=5e-5)

    def test_window_not_multiple_of_q(self):
        resolution = count_resolution(10000)
        assert classify_speed(SpeedMeasurement(3334, 10000), RationalSpeed(1, 3), resolution)
        assert classify_speed(SpeedMeasurement(3333, 10000), RationalSpeed(1, 3), resolution)
        assert not classify_speed(SpeedMeasurement(3336, 10000), RationalSpeed(1, 3), resolution)
        with pytest.raises(ParameterDomainError):
            count_resolution(0)

    def test_classify_custom_tolerance(self):
        assert classify_speed(SpeedMeasurement(4001, 10000), RationalSpeed(2, 5), tol=2e-4)
        with pytest.raises(ParameterDomainError):
            classify_speed(SpeedMeasurement(4001, 10000), RationalSpeed(2, 5), tol=0.0)


class TestSimulation:
    """Test the shifting-window simulation"""

    def test_no_migration_no_spread(self, small_sim):
        meas = simulate_speed(Params(1.2, 0.0, 0.5), small_sim)
        assert meas.shift_count == 0
        assert meas.generations == small_sim.measure_generations

    def test_half_speed_locks(self, small_sim, one_half):
        params = interior_params(FRONT_R, one_half)
        meas = simulate_speed(params, small_sim)
        assert meas.measured_speed == pytest.approx(0.5, abs=2.0 / small_sim.measure_generations)

    @pytest.mark.parametrize("p,q", [(1, 3), (2, 5)])
    def test_locked_inside_band(self, p, q):
        speed = RationalSpeed(p, q)
        cfg = SimConfig(lattice_size=200, transient_generations=3000, measure_generations=3000)
        meas = simulate_speed(interior_params(FRONT_R, speed), cfg)
        assert classify_speed(meas, speed)

    def test_lattice_size_doubling(self, one_third):
        params = interior_params(FRONT_R, one_third)
        short = SimConfig(lattice_size=150, transient_generations=1500, measure_generations=1200)
        long = SimConfig(lattice_size=300, transient_generations=1500, measure_generations=1200)
        first = simulate_speed(params, short).measured_speed
        second = simulate_speed(params, long).measured_speed
        assert abs(first - second) <= 1.0 / 1200

    def test_needs_c(self, small_sim):
        with pytest.raises(ParameterDomainError):
            simulate_speed(Params(1.2, 0.1), small_sim)

    def test_boundary_reached(self, small_sim, mocker):
        def saturated_edge(state, *args):
            out = np.zeros_like(state)
            out[-1] = 1.0
            return out

        mocker.patch('vlock.lattice_sim._step', side_effect=saturated_edge)
        with pytest.raises(BoundaryReachedError):
            simulate_speed(Params(1.2, 0.1, 0.5), small_sim)


class TestSweep:
    """Test sweeps over many parameter points"""

    def test_failures_recorded(self, small_sim):
        df = run_speed_sweep([Params(1.2, 0.0, 0.5), Params(1.2, 0.1)], small_sim)
        assert list(df.columns) == ['r', 'm', 'c', 'measured_speed', 'shift_count', 'generations', 'error']
        assert df.loc[0, 'error'] == ""
        assert df.loc[0, 'measured_speed'] == 0.0
        assert df.loc[1, 'error'] != ""
        assert np.isnan(df.loc[1, 'measured_speed'])


class TestPlateaus:
    """Test detection of constant-speed runs"""

    def test_runs(self):
        m = [0.1, 0.2, 0.3, 0.4, 0.5]
        speeds = [0.3, 1 / 3, 1 / 3, np.nan, 1 / 3]
        assert find_plateaus(m, speeds, 1 / 3, 1e-3) == [(0.2, 0.3), (0.5, 0.5)]

    def test_no_run(self):
        assert find_plateaus([0.1, 0.2], [0.0, 0.0], 0.5, 1e-3) == []
