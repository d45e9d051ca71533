# -*- coding: utf-8 -*-
"""
Tests for comparison.py - agreement between simulated locking and the bands
"""

import numpy as np
import pandas as pd
import pytest

from vlock.comparison import (
    STATUS_AGREE,
    STATUS_FAILED,
    STATUS_INTERIOR,
    agreement_statistics,
    band_spanning_grid,
    boundary_adjacent,
    compare_grid,
    staircase_plateaus,
)
from vlock.exceptions import ParameterDomainError
from vlock.lattice_sim import count_resolution, run_speed_sweep
from vlock.linear_analysis import m_star
from vlock.parameters import Params, RationalSpeed, SimConfig


@pytest.fixture
def block():
    """6×6 grid with a 3×3 band in the upper left"""
    inside = np.zeros((6, 6), dtype=bool)
    inside[1:4, 1:4] = True
    return inside


class TestBoundaryAdjacent:
    """Test the neighbourhood of the theoretical boundary"""

    def test_block_edges(self, block):
        adjacent = boundary_adjacent(block)
        assert adjacent[1, 1]
        assert adjacent[0, 0]
        assert not adjacent[2, 2]
        assert not adjacent[5, 5]

    def test_uniform_grid(self):
        assert not boundary_adjacent(np.ones((4, 4), dtype=bool)).any()


class TestAgreementStatistics:
    """Test the comparison summary"""

    def test_full_agreement(self, block):
        stats = agreement_statistics(block, block)
        assert stats['agreement_fraction'] == 1.0
        assert stats['disagreement_count'] == 0
        assert stats['passed']

    def test_boundary_disagreement_passes(self, block):
        locked = block.copy()
        locked[1, 1] = False
        stats = agreement_statistics(locked, block)
        assert stats['disagreement_count'] == 1
        assert stats['agreement_fraction'] == pytest.approx(35 / 36)
        assert stats['disagreements_boundary_adjacent']
        assert stats['passed']

    def test_interior_disagreement_fails(self, block):
        locked = block.copy()
        locked[5, 5] = True
        stats = agreement_statistics(locked, block)
        assert not stats['disagreements_boundary_adjacent']
        assert not stats['passed']

    def test_invalid_cells_ignored(self, block):
        locked = ~block
        valid = np.zeros_like(block)
        valid[0, 0] = True
        locked[0, 0] = False
        stats = agreement_statistics(locked, block, valid)
        assert stats['cells'] == 1
        assert stats['agreement_fraction'] == 1.0

    def test_shape_mismatch(self):
        with pytest.raises(ParameterDomainError):
            agreement_statistics(np.zeros((2, 2)), np.zeros((2, 3)))


class TestCompareGrid:
    """Test the cell-by-cell comparison"""

    def test_statuses(self, mocker):
        mocker.patch('vlock.comparison.theory_grid', return_value=np.array([[True, False], [True, False]]))
        sweep = pd.DataFrame([
            {'r': 1.2, 'm': 0.1, 'c': 0.3, 'measured_speed': 1 / 3, 'shift_count': 300,
             'generations': 900, 'error': ""},
            {'r': 1.2, 'm': 0.2, 'c': 0.3, 'measured_speed': np.nan, 'shift_count': -1,
             'generations': 900, 'error': "boom"},
        ])
        mocker.patch('vlock.comparison.run_speed_sweep', return_value=sweep)
        df, stats = compare_grid(1.2, RationalSpeed(1, 3), [0.1, 0.2], [0.3, 0.9], SimConfig())

        assert list(df.columns) == ['m', 'c', 'measured_speed', 'locked', 'theory_inside', 'status', 'error']
        assert df['status'].tolist() == [STATUS_AGREE, STATUS_FAILED, STATUS_FAILED, STATUS_FAILED]
        assert df.loc[2, 'error'] == "boom"
        assert bool(df.loc[0, 'locked'])
        assert stats['cells'] == 1
        assert stats['agreement_fraction'] == 1.0

    def test_band_spanning_grid(self, one_third):
        m_values, c_values = band_spanning_grid(1.2, one_third, 5, 4)
        tip = m_star(1.2, one_third).m_star
        assert len(m_values) == 5 and len(c_values) == 4
        assert m_values[0] == pytest.approx(tip / 5)
        assert m_values[-1] == pytest.approx(min(1.5 * tip, 1 - 1e-6))
        assert c_values[-1] <= 1 / 1.2
        assert np.all(np.diff(c_values) > 0)


class TestSimulationAgainstTheory:
    """Test the two pipelines against each other with real simulations"""

    def test_third_band_grid(self, one_third):
        cfg = SimConfig(lattice_size=150, transient_generations=1500, measure_generations=1200)
        m_values, c_values = band_spanning_grid(1.3, one_third, 8, 8)
        df, stats = compare_grid(1.3, one_third, m_values, c_values, cfg)
        assert stats['cells'] == 64
        assert df['theory_inside'].any() and not df['theory_inside'].all()
        assert df['locked'].any()
        assert stats['disagreements_boundary_adjacent']
        assert stats['agreement_fraction'] >= 0.9
        assert (df['status'] != STATUS_INTERIOR).all()

    def test_staircase_plateaus_overlap_bands(self):
        r, c = 1.2, 0.4
        speeds = [RationalSpeed(1, 3), RationalSpeed(2, 5), RationalSpeed(1, 2)]
        cfg = SimConfig(lattice_size=150, transient_generations=1000, measure_generations=1200)
        m_values = np.linspace(0.0, 0.99, 200)
        sweep = run_speed_sweep([Params(r, float(m), c) for m in m_values], cfg)
        df = staircase_plateaus(m_values, sweep['measured_speed'].to_numpy(), r, c, speeds,
                                count_resolution(cfg.measure_generations))
        for speed in speeds:
            rows = df[df['speed'] == str(speed)]
            assert rows['overlaps'].any(), f"no overlapping plateau for {speed}"
