# -*- coding: utf-8 -*-
"""
vlock - locked invasion fronts from the command line

Every command writes plot-ready CSV files to the output directory, each
prefixed with the resolved configuration and tolerances.

Usage:
    python main.py staircase --r 1.2 --c 0.4
    python main.py regions --r 1.2 --config regions.json
    python main.py front --r 1.3 --m 0.05 --p 1 --q 3 --tol-root-residual 1e-8
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from vlock.comparison import band_spanning_grid, compare_grid, staircase_plateaus
from vlock.config import COMMANDS, DEFAULT_STAIRCASE_M_RANGE, RunConfig
from vlock.diagnostics import conditioning_report
from vlock.exceptions import ParameterDomainError, VlockError
from vlock.front_builder import build_front, fixed_point_residual, generation_profiles, positivity_certificate
from vlock.lattice_sim import count_resolution, run_speed_sweep
from vlock.linear_analysis import (
    decay_rates_for_speed,
    envelope_speed,
    linear_spreading_speed,
    slin_m_derivative,
)
from vlock.locking_regions import bounds_from_profile, fit_width_exponent, region_sweep, width_table
from vlock.parameters import Params, RationalSpeed, coprime_speeds, speeds_table
from vlock.report import front_profile_frame, front_report_frame, front_summary, write_csv
from vlock.spectral import (
    default_lambda_ring,
    essential_spectrum_curve,
    lambda_max,
    point_spectrum_scan,
    stability_margin,
    stability_weight,
    verdicts_frame,
    WeightedSpace,
)

logger = logging.getLogger(__name__)

TOL_PREFIX = '--tol-'
STAIRCASE_SPEEDS = (RationalSpeed(1, 3), RationalSpeed(2, 5), RationalSpeed(1, 2))
SLIN_M_LOWER = 1e-3

EXIT_OK = 0
EXIT_HARD_ERROR = 1


# ==============================================================================
# ARGUMENTS
# ==============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='vlock',
        description="Locked invasion fronts: simulation, construction, locking regions and spectra",
        epilog="Tolerances are overridden with --tol-<name> <value>, e.g. --tol-root-residual 1e-8",
    )
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--config', help="JSON configuration file")
    parser.add_argument('--r', type=float, help="growth factor")
    parser.add_argument('--m', type=float, help="migration rate")
    parser.add_argument('--c', type=float, help="critical density")
    parser.add_argument('--p', type=int, help="speed numerator")
    parser.add_argument('--q', type=int, help="speed denominator")
    parser.add_argument('--out', help="output directory (default outputs)")
    parser.add_argument('--threads', type=int, help="worker count (fallback: VLOCK_THREADS)")
    parser.add_argument('--verbose', action='store_true', help="debug logging")
    return parser


def parse_tolerance_flags(parser: argparse.ArgumentParser, extras: Sequence[str]) -> Dict[str, float]:
    """
    Collect ``--tol-<name> <value>`` and ``--tol-<name>=<value>`` pairs.

    Anything else left over is a usage error (exit status 2).
    """
    overrides: Dict[str, float] = {}
    i = 0
    while i < len(extras):
        item = extras[i]
        if not item.startswith(TOL_PREFIX):
            parser.error(f"unrecognized arguments: {item}")
        name, sep, value = item[len(TOL_PREFIX):].partition('=')
        if not sep:
            if i + 1 >= len(extras):
                parser.error(f"{item} expects a value")
            value = extras[i + 1]
            i += 1
        try:
            overrides[name] = float(value)
        except ValueError:
            parser.error(f"{item} expects a number, got '{value}'")
        i += 1
    return overrides


def parse_args(argv: Optional[Sequence[str]] = None) -> Tuple[argparse.Namespace, Dict[str, float]]:
    parser = build_parser()
    args, extras = parser.parse_known_args(argv)
    return args, parse_tolerance_flags(parser, extras)


def load_config(args: argparse.Namespace, tolerances: Dict[str, float]) -> RunConfig:
    """File first, then command-line overrides."""
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    return config.with_overrides(r=args.r, m=args.m, c=args.c, p=args.p, q=args.q,
                                 out=args.out, threads=args.threads, tolerances=tolerances)


def setup_logging(out_dir: Optional[Path], verbose: bool) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if out_dir is not None:
        log_dir = out_dir / 'logs'
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers.insert(0, logging.FileHandler(log_dir / 'vlock.log'))
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


# ==============================================================================
# COMMANDS
# ==============================================================================

def _write(config: RunConfig, name: str, df: pd.DataFrame, footer: Optional[Dict] = None) -> Path:
    return write_csv(df, config.out_dir() / name, config.to_dict(),
                     config.resolved_tolerances().to_dict(), footer)


def cmd_staircase(config: RunConfig) -> List[Path]:
    """Measured speed against m at fixed (r, c), with plateau matching."""
    r, c = config.params.r, config.params.c
    m_low, m_high = DEFAULT_STAIRCASE_M_RANGE
    if config.grid.m_min is not None:
        m_low, m_high = config.grid.m_min, config.grid.m_max
    m_values = np.linspace(m_low, m_high, config.m_count('staircase'))

    points = [Params(r, float(m), c) for m in m_values]
    sweep = run_speed_sweep(points, config.sim, config.resolved_threads())
    staircase = sweep[['m', 'measured_speed', 'shift_count', 'error']]

    speed_tol = count_resolution(config.sim.measure_generations)
    plateaus = staircase_plateaus(m_values, sweep['measured_speed'].to_numpy(), r, c, STAIRCASE_SPEEDS,
                                  speed_tol, tol=config.resolved_tolerances())
    failed = int((sweep['error'] != "").sum())
    return [
        _write(config, 'staircase.csv', staircase, {'failed_points': failed}),
        _write(config, 'staircase_plateaus.csv', plateaus),
    ]


def cmd_regions(config: RunConfig) -> List[Path]:
    """One band file per coprime speed with q ≤ q_max."""
    r = config.params.r
    tol = config.resolved_tolerances()
    paths = [_write(config, 'speeds.csv', speeds_table(config.grid.q_max))]
    for speed in coprime_speeds(config.grid.q_max):
        try:
            band = region_sweep(r, speed, config.m_count('regions'), tol, config.resolved_threads())
        except VlockError as e:
            logger.error(f"Band {speed} failed: {e}")
            continue
        footer = {'speed': str(speed), 'm_star': band.m_star, 'saturated': band.saturated}
        paths.append(_write(config, f"band_{speed.label}.csv", band.to_frame(), footer))
    return paths


def cmd_compare(config: RunConfig) -> List[Path]:
    """Simulated locking against theoretical membership on an (m, c) grid."""
    r, speed = config.params.r, config.rational_speed()
    tol = config.resolved_tolerances()
    m_count, c_count = config.m_count('compare'), config.c_count()
    grid = config.grid
    if grid.m_min is not None and grid.c_min is not None:
        m_values = np.linspace(grid.m_min, grid.m_max, m_count)
        c_values = np.linspace(grid.c_min, grid.c_max, c_count)
    else:
        spanning_m, spanning_c = band_spanning_grid(r, speed, m_count, c_count, tol=tol)
        m_values = spanning_m if grid.m_min is None else np.linspace(grid.m_min, grid.m_max, m_count)
        c_values = spanning_c if grid.c_min is None else np.linspace(grid.c_min, grid.c_max, c_count)

    df, stats = compare_grid(r, speed, m_values, c_values, config.sim, tol, config.resolved_threads())
    return [_write(config, f"compare_{speed.label}.csv", df, stats)]


def cmd_front(config: RunConfig) -> List[Path]:
    """Front profile, intermediate generations and the construction report."""
    params, speed = config.model_params(), config.rational_speed()
    tol = config.resolved_tolerances()
    profile = build_front(params, speed, tol)
    bounds = bounds_from_profile(profile)

    c = params.c
    if c is None:
        c = min(0.5 * (bounds.c_min + bounds.c_max), 1.0 / params.r)
        logger.info(f"No c given; using the band midpoint c={c:.6g}")
    residual = fixed_point_residual(profile, params.with_c(c), speed)
    if not bounds.c_min < c <= bounds.c_max:
        logger.warning(f"c={c} lies outside the band ({bounds.c_min:.6g}, {bounds.c_max:.6g}]")
    certificate = positivity_certificate(profile)
    margin = stability_margin(params, speed, tol)

    generations = pd.DataFrame(generation_profiles(profile).T,
                               columns=[f"t{t}" for t in range(speed.q)])
    generations.insert(0, 'i', profile.sites)

    summary = front_summary(profile, residual, certificate, margin, bounds.c_min, bounds.c_max)
    summary['c'] = c
    return [
        _write(config, f"front_{speed.label}.csv", front_profile_frame(profile)),
        _write(config, f"front_generations_{speed.label}.csv", generations),
        _write(config, f"front_report_{speed.label}.csv", front_report_frame(profile), summary),
    ]


def cmd_slin(config: RunConfig) -> List[Path]:
    """Envelope speed curve with its minimum, and s_lin against m."""
    params = config.model_params()
    tol = config.resolved_tolerances()
    spreading = linear_spreading_speed(params, tol)

    count = config.grid.gamma_count
    gammas = np.linspace(1.0 / (count + 1), 1.0 - 1.0 / (count + 1), count)
    curve = pd.DataFrame({'gamma': gammas, 's_env': [envelope_speed(float(g), params) for g in gammas]})
    marker = {'gamma_lin': spreading.gamma_lin, 's_lin': spreading.s_lin}

    m_low = config.grid.m_min if config.grid.m_min else SLIN_M_LOWER
    m_high = config.grid.m_max if config.grid.m_max is not None else \
        min(1.0, 2.0 / params.r) * (1.0 - SLIN_M_LOWER)
    rows = []
    for m in np.linspace(m_low, m_high, config.m_count('slin')):
        point = params.with_m(float(m))
        rows.append({'m': float(m), 's_lin': linear_spreading_speed(point, tol).s_lin,
                     'ds_lin_dm': slin_m_derivative(point, tol)})
    return [
        _write(config, 'slin_curve.csv', curve, marker),
        _write(config, 'slin_m.csv', pd.DataFrame(rows), {'r': params.r}),
    ]


def cmd_spectrum(config: RunConfig) -> List[Path]:
    """Essential-spectrum curve in the weighted space and point-spectrum verdicts."""
    params, speed = config.model_params(), config.rational_speed()
    tol = config.resolved_tolerances()
    pair = decay_rates_for_speed(params, speed, tol)
    weight = config.grid.weight if config.grid.weight is not None else stability_weight(params, speed, tol)
    curve = essential_spectrum_curve(params, speed, WeightedSpace(weight), config.grid.k_count)

    footer = {
        'weight': weight,
        'lambda_max': curve.lambda_max,
        'max_modulus': curve.lambda_max_modulus,
        'lambda_max_gamma_s': lambda_max(params, speed, pair.gamma_s),
        'lambda_max_gamma_w': lambda_max(params, speed, pair.gamma_w),
        'stability_margin': stability_margin(params, speed, tol),
    }
    verdicts = point_spectrum_scan(params, speed, default_lambda_ring(), tol)
    excluded = sum(v.excluded for v in verdicts)
    return [
        _write(config, f"spectrum_{speed.label}.csv", curve.to_frame(), footer),
        _write(config, f"point_spectrum_{speed.label}.csv", verdicts_frame(verdicts),
               {'excluded': excluded, 'samples': len(verdicts)}),
    ]


def cmd_widths(config: RunConfig) -> List[Path]:
    """Band width against m on a log grid with the fitted exponent."""
    r, speed = config.params.r, config.rational_speed()
    grid = config.grid
    df = width_table(r, speed, (grid.width_m_min, grid.width_m_max), grid.width_points,
                     config.resolved_tolerances())
    exponent = fit_width_exponent(df, speed)
    return [_write(config, f"widths_{speed.label}.csv", df, {'exponent': exponent, 'p': speed.p})]


def cmd_diagnose(config: RunConfig) -> List[Path]:
    """Conditioning report for every speed with q ≤ q_max at one (r, m)."""
    df = conditioning_report(config.params.r, config.params.m, coprime_speeds(config.grid.q_max),
                             config.resolved_tolerances())
    return [_write(config, 'diagnostics.csv', df, {'certifiable': int(df['certifiable'].sum())})]


COMMAND_HANDLERS = {
    'staircase': cmd_staircase,
    'regions': cmd_regions,
    'compare': cmd_compare,
    'front': cmd_front,
    'slin': cmd_slin,
    'spectrum': cmd_spectrum,
    'widths': cmd_widths,
    'diagnose': cmd_diagnose,
}


# ==============================================================================
# ENTRY POINT
# ==============================================================================

def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command.

    Returns:
        0 on success, 1 on a hard error (usage errors exit with 2 from argparse)
    """
    args, tolerances = parse_args(argv)
    try:
        config = load_config(args, tolerances)
        config.validate(args.command)
    except ParameterDomainError as e:
        setup_logging(None, args.verbose)
        logger.error(f"Invalid configuration: {e}")
        return EXIT_HARD_ERROR

    setup_logging(config.out_dir(), args.verbose)
    logger.info(f"=== vlock {args.command} started ===")
    try:
        paths = COMMAND_HANDLERS[args.command](config)
    except VlockError as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        return EXIT_HARD_ERROR
    for path in paths:
        logger.info(f"Output: {path}")
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
