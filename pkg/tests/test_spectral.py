# -*- coding: utf-8 -*-
"""
Tests for spectral.py - weighted essential spectrum and point-spectrum exclusion
"""

import numpy as np
import pytest

from tests.conftest import FRONT_R, interior_params
from vlock.exceptions import ParameterDomainError
from vlock.linear_analysis import decay_rates_for_speed
from vlock.parameters import Params, RationalSpeed
from vlock.spectral import (
    MIN_K_COUNT,
    VERDICT_EXCLUDED,
    WeightedSpace,
    default_lambda_ring,
    essential_spectrum_curve,
    lambda_max,
    point_spectrum_scan,
    stability_margin,
    stability_weight,
    verdicts_frame,
)


class TestWeightedSpace:
    """Test the weight validation"""

    @pytest.mark.parametrize("rate", [0.0, -0.5, 1.5])
    def test_invalid_rate(self, rate):
        with pytest.raises(ParameterDomainError):
            WeightedSpace(rate)


class TestEssentialSpectrum:
    """Test the sampled essential-spectrum curve"""

    def test_unweighted_rightmost_point(self):
        params, speed = Params(1.3, 0.1), RationalSpeed(1, 3)
        curve = essential_spectrum_curve(params, speed, WeightedSpace(1.0))
        assert curve.lambda_values[0] == pytest.approx(1.3 ** 3)
        assert curve.lambda_max_modulus == pytest.approx(1.3 ** 3)

    def test_curve_closes(self, interior, speed):
        weight = stability_weight(interior, speed)
        curve = essential_spectrum_curve(interior, speed, WeightedSpace(weight))
        assert curve.closure_error < 1e-12 * max(1.0, curve.lambda_max_modulus)
        assert len(curve.to_frame()) == 256

    def test_too_few_samples(self):
        with pytest.raises(ParameterDomainError):
            essential_spectrum_curve(Params(1.3, 0.1), RationalSpeed(1, 3), WeightedSpace(0.5),
                                     k_count=MIN_K_COUNT - 1)

    def test_unit_at_decay_rates(self, interior, speed):
        pair = decay_rates_for_speed(interior, speed)
        assert lambda_max(interior, speed, pair.gamma_s) == pytest.approx(1.0, abs=1e-10)
        assert lambda_max(interior, speed, pair.gamma_w) == pytest.approx(1.0, abs=1e-10)

    def test_stable_between_rates(self, interior, speed):
        assert stability_margin(interior, speed) > 0.0
        weight = stability_weight(interior, speed)
        curve = essential_spectrum_curve(interior, speed, WeightedSpace(weight))
        assert curve.lambda_max_modulus < 1.0
        assert curve.lambda_max == pytest.approx(lambda_max(interior, speed, weight))

    def test_rightmost_point_dominates(self):
        params, speed = Params(1.3, 0.1), RationalSpeed(2, 5)
        curve = essential_spectrum_curve(params, speed, WeightedSpace(0.4))
        assert np.all(np.abs(curve.lambda_values) <= curve.lambda_max * (1 + 1e-12))


class TestPointSpectrum:
    """Test the eigenvalue exclusion scan"""

    @pytest.mark.parametrize("p,q", [(1, 2), (1, 3), (2, 5)])
    def test_ring_excluded(self, p, q):
        speed = RationalSpeed(p, q)
        params = interior_params(FRONT_R, speed)
        verdicts = point_spectrum_scan(params, speed, default_lambda_ring())
        assert len(verdicts) == 32
        assert all(v.verdict == VERDICT_EXCLUDED for v in verdicts)
        assert all(v.inside_count == speed.n for v in verdicts)

    def test_rejects_inner_samples(self, one_third):
        params = interior_params(FRONT_R, one_third)
        with pytest.raises(ParameterDomainError):
            point_spectrum_scan(params, one_third, [0.5])

    def test_frame(self, one_third):
        params = interior_params(FRONT_R, one_third)
        df = verdicts_frame(point_spectrum_scan(params, one_third, [1.0, 2.0j]))
        assert list(df['verdict']) == [VERDICT_EXCLUDED, VERDICT_EXCLUDED]
        assert df['im_lambda'].tolist() == [0.0, 2.0]
