# -*- coding: utf-8 -*-
"""
Conditioning diagnostics for front construction at large q
"""

import logging
import math
from typing import Iterable, Optional

import pandas as pd

from .exceptions import VlockError
from .front_builder import FrontProfile, build_front, check_coefficients, positivity_certificate
from .linear_analysis import decay_rates_for_speed
from .locking_regions import asymptotic_root_errors, monotonicity_violations, rounding_allowance
from .parameters import Params, RationalSpeed
from .root_engine import char_roots, select_front_roots
from .tolerances import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    'p', 'q', 'N', 'vandermonde_condition', 'min_zeta_separation', 'modulus_gap',
    'asymptotic_root_error', 'asymptotic_zeta_error',
    'max_abs_k', 'coefficient_sum_error', 'max_imag_residue', 'coefficient_disagreement',
    'certifiable', 'error',
]


def _diagnose_speed(params: Params, speed: RationalSpeed, tol: Tolerances) -> dict:
    row = {column: math.nan for column in REPORT_COLUMNS}
    row.update(p=speed.p, q=speed.q, N=speed.n, certifiable=False, error="")
    try:
        # Staged so that the conditioning numbers survive a later failure
        pair = decay_rates_for_speed(params, speed, tol)
        pair.require_regular()
        roots = select_front_roots(char_roots(params, speed, 1.0, tol), pair.gamma_s, pair.gamma_w,
                                   params, speed, tol)
        row['modulus_gap'] = roots.modulus_gap / roots.gamma_s
        row['asymptotic_root_error'], row['asymptotic_zeta_error'] = asymptotic_root_errors(roots, params, speed)

        check = check_coefficients(roots.zetas, tol)
        row.update(
            vandermonde_condition=check.condition,
            min_zeta_separation=check.min_separation,
            coefficient_disagreement=check.disagreement,
            max_abs_k=float(abs(check.product).max()),
            coefficient_sum_error=float(abs(check.product.sum() - 1.0)),
        )

        profile = build_front(params, speed, tol)
        row['max_imag_residue'] = profile.max_imag_residue
        cert = positivity_certificate(profile)
        row['certifiable'] = bool(
            cert.positive and cert.tail_certified
            and not monotonicity_violations(profile)
            and check.disagreement <= tol.vandermonde_agreement
        )
    except VlockError as e:
        row['error'] = f"{type(e).__name__}: {e}"
        logger.warning(f"Diagnostics for {speed} at r={params.r}, m={params.m}: {e}")
    return row


def conditioning_report(r: float, m: float, speeds: Iterable[RationalSpeed],
                        tol: Tolerances = DEFAULT_TOLERANCES) -> pd.DataFrame:
    """
    Report how well-conditioned the front construction is for each speed.

    Shows:
    - Vandermonde condition number and the smallest zeta separation
    - Relative modulus gap between the N-th and (N+1)-th root
    - Distance of the roots and zetas from their small-m expansions
    - Coefficient size, normalization error and product-vs-solve disagreement
    - Largest imaginary residue of the Γ table
    - Whether positivity, monotonicity and the cross-check all hold

    Args:
        r: Growth factor
        m: Migration rate (below m* of every listed speed)
        speeds: Speeds to examine
        tol: Tolerance set

    Returns:
        DataFrame with one row per speed (columns REPORT_COLUMNS)
    """
    params = Params(r, m)
    rows = [_diagnose_speed(params, speed, tol) for speed in speeds]
    df = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    logger.info(f"Conditioning report at r={r}, m={m}: {int(df['certifiable'].sum())}/{len(df)} certifiable")
    return df


def gamma_monotonicity_violations(profile: FrontProfile, n_max: Optional[int] = None) -> pd.DataFrame:
    """
    List every n where Γ_{n+1} < Γ_n fails beyond rounding.

    Args:
        profile: Constructed front
        n_max: Last index checked (default 3q)

    Returns:
        DataFrame with columns n, gamma_n, gamma_next, increase, allowance
    """
    rows = []
    for n in monotonicity_violations(profile, n_max):
        current, following = profile.gamma(n), profile.gamma(n + 1)
        rows.append({
            'n': n,
            'gamma_n': current,
            'gamma_next': following,
            'increase': following - current,
            'allowance': rounding_allowance(profile, n),
        })
    return pd.DataFrame(rows, columns=['n', 'gamma_n', 'gamma_next', 'increase', 'allowance'])
