# -*- coding: utf-8 -*-
"""
Run configuration: JSON file, .env and command-line overrides
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from .exceptions import ParameterDomainError
from .parameters import Params, RationalSpeed, SimConfig
from .spectral import MIN_K_COUNT
from .tolerances import DEFAULT_TOLERANCES, Tolerances

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

THREADS_ENV = "VLOCK_THREADS"
DEFAULT_OUT = "outputs"

COMMANDS = ('staircase', 'regions', 'compare', 'front', 'slin', 'spectrum', 'widths', 'diagnose')

# Grid sizes when the config leaves m_count / c_count unset
DEFAULT_M_COUNT = {'staircase': 200, 'regions': 100, 'compare': 20, 'slin': 100}
DEFAULT_C_COUNT = 20
DEFAULT_STAIRCASE_M_RANGE = (0.0, 0.99)

# Parameters each command needs before it can start
REQUIRED_FIELDS = {
    'staircase': ('r', 'c'),
    'regions': ('r',),
    'compare': ('r', 'p', 'q'),
    'front': ('r', 'm', 'p', 'q'),
    'slin': ('r', 'm'),
    'spectrum': ('r', 'm', 'p', 'q'),
    'widths': ('r', 'p', 'q'),
    'diagnose': ('r', 'm'),
}


@dataclass(frozen=True)
class ParamsBlock:
    r: Optional[float] = None
    m: Optional[float] = None
    c: Optional[float] = None


@dataclass(frozen=True)
class SpeedBlock:
    p: Optional[int] = None
    q: Optional[int] = None


@dataclass(frozen=True)
class GridBlock:
    """Sweep grids; None means the command picks its own default"""

    m_min: Optional[float] = None
    m_max: Optional[float] = None
    m_count: Optional[int] = None
    c_min: Optional[float] = None
    c_max: Optional[float] = None
    c_count: Optional[int] = None
    q_max: int = 20
    k_count: int = 256
    gamma_count: int = 200
    width_m_min: float = 1e-4
    width_m_max: float = 1e-2
    width_points: int = 12
    weight: Optional[float] = None


@dataclass(frozen=True)
class RunConfig:
    """
    Complete configuration of one CLI run.

    Blocks mirror the JSON file layout::

        {"params": {"r": 1.3, "m": 0.05}, "speed": {"p": 1, "q": 3},
         "grid": {"m_count": 50}, "sim": {"lattice_size": 300},
         "out": "outputs", "threads": 4, "tolerances": {"root_residual": 1e-9}}
    """

    params: ParamsBlock = field(default_factory=ParamsBlock)
    speed: SpeedBlock = field(default_factory=SpeedBlock)
    grid: GridBlock = field(default_factory=GridBlock)
    sim: SimConfig = field(default_factory=SimConfig)
    out: str = DEFAULT_OUT
    threads: Optional[int] = None
    tolerances: Dict[str, float] = field(default_factory=dict)

    # ==========================================================================
    # LOADING
    # ==========================================================================

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """
        Build a configuration from nested dictionaries.

        Raises:
            ParameterDomainError: On unknown keys or invalid blocks
        """
        blocks = {'params': ParamsBlock, 'speed': SpeedBlock, 'grid': GridBlock, 'sim': SimConfig}
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterDomainError(f"Unknown config keys: {sorted(unknown)}")

        kwargs: Dict[str, Any] = {}
        for name, value in data.items():
            if name in blocks:
                if not isinstance(value, dict):
                    raise ParameterDomainError(f"Config block '{name}' must be an object")
                block_fields = {f.name for f in fields(blocks[name])}
                bad = set(value) - block_fields
                if bad:
                    raise ParameterDomainError(f"Unknown keys in '{name}': {sorted(bad)}")
                try:
                    kwargs[name] = blocks[name](**value)
                except TypeError as e:
                    raise ParameterDomainError(f"Invalid '{name}' block: {e}") from e
            else:
                kwargs[name] = value
        config = cls(**kwargs)
        # Unknown tolerance names fail early
        config.resolved_tolerances()
        return config

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        """
        Load a JSON configuration file.

        Args:
            path: Path to the file

        Returns:
            RunConfig

        Raises:
            ParameterDomainError: If the file cannot be read or parsed
        """
        try:
            with open(path, encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ParameterDomainError(f"Cannot read config file {path}: {e}") from e
        if not isinstance(data, dict):
            raise ParameterDomainError(f"Config file {path} must hold a JSON object")
        logger.info(f"Loaded config from {path}")
        return cls.from_dict(data)

    def with_overrides(self, r: Optional[float] = None, m: Optional[float] = None, c: Optional[float] = None,
                       p: Optional[int] = None, q: Optional[int] = None, out: Optional[str] = None,
                       threads: Optional[int] = None,
                       tolerances: Optional[Dict[str, float]] = None) -> "RunConfig":
        """Apply command-line values on top of the file; None leaves a field as loaded."""
        params = replace(self.params, **{k: v for k, v in (('r', r), ('m', m), ('c', c)) if v is not None})
        speed = replace(self.speed, **{k: v for k, v in (('p', p), ('q', q)) if v is not None})
        merged_tol = dict(self.tolerances)
        for name, value in (tolerances or {}).items():
            merged_tol[name.replace('-', '_')] = value
        return replace(
            self,
            params=params,
            speed=speed,
            out=out if out is not None else self.out,
            threads=threads if threads is not None else self.threads,
            tolerances=merged_tol,
        )

    # ==========================================================================
    # RESOLVED VALUES
    # ==========================================================================

    def resolved_threads(self) -> int:
        """--threads, else VLOCK_THREADS, else 1."""
        if self.threads is not None:
            return int(self.threads)
        value = os.getenv(THREADS_ENV)
        if not value:
            return 1
        try:
            return int(value)
        except ValueError as e:
            raise ParameterDomainError(f"{THREADS_ENV} must be an integer, got '{value}'") from e

    def resolved_tolerances(self) -> Tolerances:
        return DEFAULT_TOLERANCES.with_overrides(self.tolerances)

    def model_params(self) -> Params:
        return Params(self.params.r, self.params.m, self.params.c)  # type: ignore[arg-type]

    def rational_speed(self) -> RationalSpeed:
        return RationalSpeed(self.speed.p, self.speed.q)  # type: ignore[arg-type]

    def m_count(self, command: str) -> int:
        return self.grid.m_count if self.grid.m_count is not None else DEFAULT_M_COUNT.get(command, 100)

    def c_count(self) -> int:
        return self.grid.c_count if self.grid.c_count is not None else DEFAULT_C_COUNT

    def out_dir(self) -> Path:
        return Path(self.out)

    def to_dict(self) -> Dict[str, Any]:
        """Canonical nested dictionary (threads resolved) for output headers."""
        data = asdict(self)
        data['threads'] = self.resolved_threads()
        data['tolerances'] = self.resolved_tolerances().to_dict()
        return data

    # ==========================================================================
    # VALIDATION
    # ==========================================================================

    def validation_errors(self, command: str) -> List[str]:
        """
        Check every field the command uses.

        Args:
            command: One of COMMANDS

        Returns:
            List of error messages (empty if valid)
        """
        if command not in COMMANDS:
            return [f"Unknown command '{command}'. Valid: {list(COMMANDS)}"]

        errors = []
        values = {'r': self.params.r, 'm': self.params.m, 'c': self.params.c,
                  'p': self.speed.p, 'q': self.speed.q}
        missing = [name for name in REQUIRED_FIELDS[command] if values[name] is None]
        if missing:
            errors.append(f"Command '{command}' needs {missing}")

        checks = [self.resolved_threads, self.resolved_tolerances]
        if self.params.r is not None:
            checks.append(lambda: Params(self.params.r, self.params.m or 0.0, self.params.c))
        if self.speed.p is not None and self.speed.q is not None:
            checks.append(self.rational_speed)
        for check in checks:
            try:
                check()
            except ParameterDomainError as e:
                errors.append(str(e))

        if self.threads == 0:
            errors.append("threads must be nonzero")

        grid = self.grid
        if self.m_count(command) < 2:
            errors.append(f"m_count must be ≥ 2, got {self.m_count(command)}")
        if self.c_count() < 2:
            errors.append(f"c_count must be ≥ 2, got {self.c_count()}")
        if grid.q_max < 2:
            errors.append(f"q_max must be ≥ 2, got {grid.q_max}")
        if grid.k_count < MIN_K_COUNT:
            errors.append(f"k_count must be ≥ {MIN_K_COUNT}, got {grid.k_count}")
        if grid.gamma_count < 2:
            errors.append(f"gamma_count must be ≥ 2, got {grid.gamma_count}")
        if grid.weight is not None and not 0.0 < grid.weight <= 1.0:
            errors.append(f"weight must lie in (0, 1], got {grid.weight}")
        if not 0.0 < grid.width_m_min < grid.width_m_max < 1.0:
            errors.append(f"Need 0 < width_m_min < width_m_max < 1, got {grid.width_m_min}, {grid.width_m_max}")
        if grid.width_points < 4:
            errors.append(f"width_points must be ≥ 4, got {grid.width_points}")
        for low_name, high_name in (('m_min', 'm_max'), ('c_min', 'c_max')):
            low, high = getattr(grid, low_name), getattr(grid, high_name)
            if (low is None) != (high is None):
                errors.append(f"{low_name} and {high_name} must be given together")
            elif low is not None and not low < high:
                errors.append(f"Need {low_name} < {high_name}, got {low} and {high}")
        if grid.m_min is not None and grid.m_max is not None and not 0.0 <= grid.m_min < grid.m_max < 1.0:
            errors.append(f"m range must lie in [0, 1), got [{grid.m_min}, {grid.m_max}]")
        if grid.c_min is not None and grid.c_max is not None and not 0.0 < grid.c_min < grid.c_max <= 1.0:
            errors.append(f"c range must lie in (0, 1], got [{grid.c_min}, {grid.c_max}]")
        return errors

    def validate(self, command: str) -> None:
        """
        Reject a configuration before any computation starts.

        Raises:
            ParameterDomainError: Listing every problem found
        """
        errors = self.validation_errors(command)
        if errors:
            raise ParameterDomainError("; ".join(errors))
