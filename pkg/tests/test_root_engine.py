# -*- coding: utf-8 -*-
"""
Tests for root_engine.py - characteristic roots, selection and zetas
"""

import numpy as np
import pytest

from tests.conftest import FRONT_R, random_draws
from vlock.exceptions import ParameterDomainError, RootEngineError
from vlock.linear_analysis import decay_rates_for_speed, m_star, trinomial
from vlock.parameters import Params, RationalSpeed
from vlock.root_engine import (
    char_roots,
    characteristic_coefficients,
    diophantine,
    fractional_root,
    merged_pairs,
    select_front_roots,
)
from vlock.tolerances import Tolerances


def _front_roots(params, speed):
    pair = decay_rates_for_speed(params, speed)
    return select_front_roots(char_roots(params, speed), pair.gamma_s, pair.gamma_w, params, speed), pair


class TestDiophantine:
    """Test the exponents of the zeta construction"""

    @pytest.mark.parametrize("q,n,expected", [(3, 2, (1, 2)), (5, 3, (1, 2)), (8, 5, (3, 5))])
    def test_known_pairs(self, q, n, expected):
        assert diophantine(q, n) == expected

    @pytest.mark.parametrize("q,n", [(5, 2), (7, 3), (11, 4), (13, 8), (20, 9)])
    def test_identity(self, q, n):
        ell1, ell2 = diophantine(q, n)
        assert q * ell1 - n * ell2 == -1
        assert 0 < ell1 < ell2
        assert ell1 < n

    def test_single_root(self):
        assert diophantine(2, 1) == (0, 1)

    def test_not_coprime(self):
        with pytest.raises(ParameterDomainError):
            diophantine(4, 2)


class TestCharacteristicPolynomial:
    """Test the expanded polynomial and its roots"""

    def test_coefficients_sum(self):
        coeffs = characteristic_coefficients(Params(1.2, 0.1), RationalSpeed(2, 5))
        assert coeffs.sum() == pytest.approx(1.2 ** 5 - 1)

    def test_root_count_and_residual(self):
        params, speed = Params(1.3, 0.05), RationalSpeed(2, 5)
        roots = char_roots(params, speed)
        assert len(roots) == 2 * speed.q
        for z in roots:
            lhs = trinomial(z, params) ** speed.q
            rhs = z ** speed.n
            assert abs(lhs - rhs) <= 1e-9 * (abs(lhs) + abs(rhs))

    def test_contains_strong_rate(self):
        speed = RationalSpeed(1, 3)
        params = Params(FRONT_R, 0.5 * m_star(FRONT_R, speed).m_star)
        gamma_s = decay_rates_for_speed(params, speed).gamma_s
        roots = char_roots(params, speed)
        assert np.min(np.abs(roots - gamma_s)) <= 1e-10 * gamma_s

    def test_complex_lambda(self):
        params, speed = Params(1.3, 0.05), RationalSpeed(1, 3)
        lam = 1.5j
        for z in char_roots(params, speed, lam):
            assert trinomial(z, params) ** 3 == pytest.approx(lam * z ** 2, rel=1e-8)

    def test_zero_lambda(self):
        with pytest.raises(ParameterDomainError):
            char_roots(Params(1.3, 0.05), RationalSpeed(1, 3), 0.0)

    def test_tight_residual_fails(self):
        with pytest.raises(RootEngineError):
            char_roots(Params(1.3, 0.05), RationalSpeed(3, 8), tol=Tolerances(root_residual=1e-300))


class TestRootSelection:
    """Test selection of the N smallest roots"""

    def test_half_single_real_root(self, one_half):
        params = Params(FRONT_R, 0.5 * m_star(FRONT_R, one_half).m_star)
        roots, pair = _front_roots(params, one_half)
        assert roots.n == 1
        assert roots.gammas[0].imag == 0.0
        assert roots.gammas[0].real == pytest.approx(pair.gamma_s, rel=1e-9)

    def test_third_real_pair(self, one_third):
        params = Params(FRONT_R, 0.5 * m_star(FRONT_R, one_third).m_star)
        roots, pair = _front_roots(params, one_third)
        gamma_1, gamma_2 = roots.gammas
        assert gamma_1.real == pytest.approx(pair.gamma_s, rel=1e-9)
        assert gamma_2.imag == 0.0
        assert -gamma_1.real < gamma_2.real < 0.0

    @pytest.mark.parametrize("p,q", [(2, 5), (3, 8), (3, 7)])
    def test_conjugate_closure(self, p, q):
        speed = RationalSpeed(p, q)
        params = Params(FRONT_R, 0.5 * m_star(FRONT_R, speed).m_star)
        roots, pair = _front_roots(params, speed)
        assert roots.n == q - p
        assert np.all(np.abs(roots.gammas) <= pair.gamma_s * (1 + 1e-9))
        nonreal = roots.gammas[roots.gammas.imag != 0]
        assert sorted(nonreal.imag) == sorted((-nonreal).imag)
        assert roots.modulus_gap > 0

    def test_zetas_are_inverse_roots(self, one_third):
        params = Params(FRONT_R, 0.5 * m_star(FRONT_R, one_third).m_star)
        roots, _ = _front_roots(params, one_third)
        for gamma, zeta in zip(roots.gammas, roots.zetas):
            assert zeta ** 3 * gamma == pytest.approx(1.0, rel=1e-10)
        assert roots.zetas[0].real > 0
        assert roots.zetas[0].imag == 0.0

    def test_fractional_root_conjugation(self):
        params = Params(1.3, 0.05)
        gamma = 0.01 + 0.02j
        assert fractional_root(gamma.conjugate(), params, 3, 5) == \
            pytest.approx(fractional_root(gamma, params, 3, 5).conjugate())

    def test_wrong_strong_rate(self, one_third):
        params = Params(FRONT_R, 0.5 * m_star(FRONT_R, one_third).m_star)
        pair = decay_rates_for_speed(params, one_third)
        with pytest.raises(RootEngineError):
            select_front_roots(char_roots(params, one_third), 0.5 * pair.gamma_s, pair.gamma_w,
                               params, one_third)

    def test_merged_roots_rejected(self, one_third):
        params = Params(FRONT_R, 0.5 * m_star(FRONT_R, one_third).m_star)
        pair = decay_rates_for_speed(params, one_third)
        roots = char_roots(params, one_third)
        smallest = roots[np.argmin(np.abs(roots))]
        duplicated = np.append(roots, smallest)
        with pytest.raises(RootEngineError, match="coincide"):
            select_front_roots(duplicated, pair.gamma_s, pair.gamma_w, params, one_third)


class TestMergedPairs:
    """Test detection of coinciding roots"""

    def test_distinct(self):
        assert merged_pairs([1.0, -1.0, 0.5j], 1e-8) == []

    def test_relative_distance(self):
        assert merged_pairs([1e-6, 1e-6 * (1 + 1e-10), 2.0], 1e-8) == [(0, 1)]


class TestRobustRoots:
    """Test roots where the expanded power spans many orders of magnitude"""

    @pytest.mark.parametrize("r,m,p,q", [
        (1.685, 0.0271, 9, 20),
        (1.3945, 0.106, 16, 19),
        (1.637, 0.2644, 15, 17),
    ])
    def test_clustered_roots(self, r, m, p, q):
        params, speed = Params(r, m), RationalSpeed(p, q)
        roots, pair = _front_roots(params, speed)
        assert roots.n == q - p
        assert roots.gammas[0].real == pytest.approx(pair.gamma_s, rel=1e-9)

    def test_seventeenths_at_r_1_5(self):
        speed = RationalSpeed(3, 17)
        params = Params(1.5, 0.575 * m_star(1.5, speed).m_star)
        roots, _ = _front_roots(params, speed)
        assert roots.n == 14

    def test_recovers_from_bad_companion_roots(self, mocker):
        params, speed = Params(1.3, 0.05), RationalSpeed(2, 5)
        mocker.patch('vlock.root_engine._expanded_roots', return_value=np.zeros(2 * speed.q, dtype=complex))
        roots = char_roots(params, speed)
        assert len(roots) == 2 * speed.q
        assert merged_pairs(roots, 1e-8) == []
        for z in roots:
            lhs = trinomial(z, params) ** speed.q
            rhs = z ** speed.n
            assert abs(lhs - rhs) <= 1e-9 * (abs(lhs) + abs(rhs))


class TestRandomizedRoots:
    """Test the disk count over random valid parameter draws"""

    def test_disk_count_and_residuals(self):
        for params, speed in random_draws(100, seed=11):
            label = f"{speed} r={params.r} m={params.m}"
            pair = decay_rates_for_speed(params, speed)
            roots = char_roots(params, speed)
            assert len(roots) == 2 * speed.q, label
            assert merged_pairs(roots, 1e-8) == [], label
            for z in roots:
                lhs = trinomial(z, params) ** speed.q
                rhs = z ** speed.n
                assert abs(lhs - rhs) <= 1e-9 * (abs(lhs) + abs(rhs)), label

            inside = roots[np.abs(roots) <= pair.gamma_s * (1 + 1e-9)]
            assert len(inside) == speed.n, label
            selected = select_front_roots(roots, pair.gamma_s, pair.gamma_w, params, speed)
            nonreal = selected.gammas[selected.gammas.imag != 0]
            assert sorted(nonreal.imag) == pytest.approx(sorted((-nonreal).imag)), label
