# -*- coding: utf-8 -*-
"""
CSV output with a '#' header recording the resolved configuration
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from .front_builder import FrontProfile, PositivityCertificate

logger = logging.getLogger(__name__)

COMMENT = '#'


def canonical_json(data: Any) -> str:
    """Sorted, compact JSON so that equal configs give equal bytes."""
    return json.dumps(data, sort_keys=True, separators=(',', ':'), default=str)


def _format_value(value: Any) -> str:
    if isinstance(value, np.bool_):
        value = bool(value)
    if value is None or isinstance(value, (bool, dict, list, tuple)):
        return canonical_json(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(df: pd.DataFrame, path: Path, config: Mapping[str, Any], tolerances: Mapping[str, float],
              footer: Optional[Mapping[str, Any]] = None, columns: Optional[List[str]] = None) -> Path:
    """
    Write a table with its configuration header.

    Layout:
    - ``# config: <canonical JSON>``
    - ``# tolerances: <canonical JSON>``
    - the column header row and the data rows
    - optional ``# key: value`` footer lines

    Nothing time-dependent is written, so equal inputs give equal files.

    Args:
        df: Table to write
        path: Target file (parent directories are created)
        config: Resolved configuration
        tolerances: Resolved tolerances
        footer: Summary records appended after the data
        columns: Column order to export (default all)

    Returns:
        The path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    # Filter to available columns
    if columns is not None:
        df = df[[col for col in columns if col in df.columns]]

    lines = [
        f"{COMMENT} config: {canonical_json(config)}\n",
        f"{COMMENT} tolerances: {canonical_json(tolerances)}\n",
    ]
    body = df.to_csv(index=False, lineterminator='\n')
    tail = [f"{COMMENT} {key}: {_format_value(value)}\n" for key, value in (footer or {}).items()]

    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(''.join(lines))
        f.write(body)
        f.write(''.join(tail))
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path


def read_csv_with_header(path: Path) -> Tuple[pd.DataFrame, Dict[str, Any]]:
    """
    Read a file produced by :func:`write_csv`.

    Args:
        path: CSV file

    Returns:
        (table, comment records) where JSON-valued records are decoded
    """
    records: Dict[str, Any] = {}
    with open(path, encoding='utf-8') as f:
        for line in f:
            if not line.startswith(COMMENT):
                continue
            key, _, value = line[len(COMMENT):].strip().partition(': ')
            try:
                records[key] = json.loads(value)
            except json.JSONDecodeError:
                records[key] = value
    df = pd.read_csv(path, comment=COMMENT)
    return df, records


# ==============================================================================
# FRONT REPORT
# ==============================================================================

def front_profile_frame(profile: FrontProfile) -> pd.DataFrame:
    """Sites and values (i, φ_i) of a constructed front."""
    return pd.DataFrame({'i': profile.sites, 'phi': profile.phi})


def front_report_frame(profile: FrontProfile) -> pd.DataFrame:
    """
    Long-format report of the construction data.

    Rows carry quantity (k, gamma, zeta, Gamma), index, re, im: the
    coefficients, roots and zetas for j = 1 … N and Γ_n for n = 1 … 2q.
    """
    rows = []
    for name, values in (('k', profile.ks), ('gamma', profile.roots.gammas), ('zeta', profile.roots.zetas)):
        for j, value in enumerate(values, start=1):
            rows.append({'quantity': name, 'index': j, 're': float(value.real), 'im': float(value.imag)})
    for n in range(1, 2 * profile.speed.q + 1):
        rows.append({'quantity': 'Gamma', 'index': n, 're': profile.gamma(n), 'im': 0.0})
    return pd.DataFrame(rows, columns=['quantity', 'index', 're', 'im'])


def front_summary(profile: FrontProfile, residual: Optional[float], certificate: PositivityCertificate,
                  margin: float, c_min: float, c_max: float) -> Dict[str, Any]:
    """Footer records of the front report."""
    return {
        'coefficient_sum': float(profile.ks.sum().real),
        'coefficient_sum_error': profile.coefficient_sum_error,
        'ell1': profile.roots.ell1,
        'ell2': profile.roots.ell2,
        'gamma_s': profile.roots.gamma_s,
        'gamma_w': profile.roots.gamma_w,
        'c_min': c_min,
        'c_max': c_max,
        'fixed_point_residual': residual if residual is not None else 'not evaluated',
        'positive': certificate.positive,
        'positivity_i_star': certificate.i_star,
        'tail_certified': certificate.tail_certified,
        'stability_margin': margin,
    }
