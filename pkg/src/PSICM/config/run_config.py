"""
Per-run configuration of the command-line front end.

Values are merged with the precedence flags > --config file > Settings, then
validated as one RunConfig. Validation failures become ConfigurationError
carrying the dotted name of the offending field ("grid.min", "quadrature.abs_tol").

The config file is flat key=value text; blank lines and text after '#' are
ignored, and list values are comma separated:

    grid.min = 1e-3
    grid.points = 40
    alpha = -1, 0, 1
"""

import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, field_validator

from src.PSICM.certify.engine import Method
from src.PSICM.config.settings import Settings, get_settings
from src.PSICM.core.errors import ConfigurationError
from src.PSICM.core.grids import linear_grid, log_grid
from src.PSICM.core.kernels import QuadratureConfig
from src.PSICM.core.specfun import K_MAX
from src.PSICM.core.theta import ALPHA_DERIV_MAX

logger = logging.getLogger(__name__)

LIST_KEYS: frozenset = frozenset({"alpha", "steps"})
NESTED_FIELDS: frozenset = frozenset({"grid", "quadrature"})
FIELD_ALIASES: Dict[str, str] = {"max_order": "order", "alphas": "alpha"}
FILE_KEYS: frozenset = frozenset(
    {
        "grid.min",
        "grid.max",
        "grid.points",
        "grid.log",
        "alpha",
        "order",
        "steps",
        "tol",
        "out",
        "method",
        "quadrature.abs_tol",
        "quadrature.rel_tol",
        "quadrature.small_t_cutoff",
        "quadrature.max_subdivisions",
    }
)


class Command(str, Enum):
    EVAL = "eval"
    IDENTITIES = "identities"
    BOUNDS = "bounds"
    CERTIFY = "certify"
    LIMITS = "limits"


class GridSpec(BaseModel):
    """
    Evaluation grid description.

    Attributes:
        min: Smallest abscissa, > 0.
        max: Largest abscissa, >= min.
        points: Number of abscissae; 1 only when min == max.
        log: Log spacing when true, linear otherwise.
    """

    model_config = ConfigDict(frozen=True)

    min: float
    max: float
    points: int
    log: bool = True

    @field_validator("min")
    @classmethod
    def validate_min(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError("must be finite and > 0")
        return v

    @field_validator("max")
    @classmethod
    def validate_max(cls, v: float, info: ValidationInfo) -> float:
        lo: Optional[float] = info.data.get("min")
        if not math.isfinite(v) or (lo is not None and v < lo):
            raise ValueError("must be finite and >= grid.min")
        return v

    @field_validator("points")
    @classmethod
    def validate_points(cls, v: int, info: ValidationInfo) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        if v == 1 and info.data.get("min") != info.data.get("max"):
            raise ValueError("must be at least 2 unless grid.min == grid.max")
        return v

    def abscissae(self) -> List[float]:
        if self.log:
            return log_grid(self.min, self.max, self.points)
        return linear_grid(self.min, self.max, self.points)


class RunConfig(BaseModel):
    """
    Fully resolved configuration of one command-line run.

    Attributes:
        command: Sub-command to execute.
        method: Certification method for the certify command.
        grid: Evaluation grid; None keeps each command's own default
            (per-bound windows for bounds, the CM grid for certify).
        alphas: Exponents of theta_alpha.
        max_order: Highest order of a certification sweep.
        steps: Finite-difference steps of a sweep.
        tol: Residual or margin tolerance; None keeps the command default.
        out: CSV destination; standard output when None.
        quadrature: Laplace quadrature settings.
    """

    model_config = ConfigDict(frozen=True)

    command: Command
    method: Method = Method.DIFFERENCE
    grid: Optional[GridSpec] = None
    alphas: List[float] = Field(default_factory=lambda: [1.0])
    max_order: int = 10
    steps: List[float] = Field(default_factory=lambda: [0.25, 1.0])
    tol: Optional[float] = None
    out: Optional[Path] = None
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)

    @field_validator("method")
    @classmethod
    def validate_method(cls, v: Method) -> Method:
        if v is Method.LOGARITHMIC:
            raise ValueError("must be 'difference' or 'analytic'")
        return v

    @field_validator("alphas")
    @classmethod
    def validate_alphas(cls, v: List[float], info: ValidationInfo) -> List[float]:
        if any(not math.isfinite(a) for a in v):
            raise ValueError("must contain finite exponents")
        if not v and info.data.get("command") in (Command.CERTIFY, Command.EVAL):
            raise ValueError("must not be empty")
        return v

    @field_validator("max_order")
    @classmethod
    def validate_max_order(cls, v: int, info: ValidationInfo) -> int:
        hi: int = ALPHA_DERIV_MAX if info.data.get("method") is Method.ANALYTIC else K_MAX
        if not 0 <= v <= hi:
            raise ValueError(f"must lie in [0, {hi}]")
        return v

    @field_validator("steps")
    @classmethod
    def validate_steps(cls, v: List[float]) -> List[float]:
        if not v or any(not math.isfinite(h) or h <= 0.0 for h in v):
            raise ValueError("must be a non-empty list of positive steps")
        return sorted(v)

    @field_validator("tol")
    @classmethod
    def validate_tol(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and (not math.isfinite(v) or v <= 0.0):
            raise ValueError("must be finite and > 0")
        return v

    def abscissae(self) -> Optional[List[float]]:
        """Grid abscissae, or None when the command default applies."""
        return self.grid.abscissae() if self.grid is not None else None


def parse_config_file(path: Path) -> Dict[str, Any]:
    """
    Read a flat key=value config file.

    Args:
        path: File to read.

    Returns:
        Mapping of dotted keys to raw values; list keys map to lists of strings.

    Raises:
        ConfigurationError: On a malformed line, an unknown key or an unreadable file.
    """
    try:
        text: str = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError("config", f"cannot read {path}: {e}") from e

    values: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line: str = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError("config", f"line {lineno} is not key=value: {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in FILE_KEYS:
            raise ConfigurationError(key, f"unknown key on line {lineno}")
        values[key] = [item.strip() for item in value.split(",") if item.strip()] if key in LIST_KEYS else value
    logger.debug(f"Read {len(values)} values from {path}")
    return values


def _settings_defaults(command: Command, method: Method, source: Settings) -> Dict[str, Any]:
    max_order: int = source.CM_MAX_ORDER
    if method is Method.ANALYTIC:
        max_order = min(max_order, ALPHA_DERIV_MAX)
    defaults: Dict[str, Any] = {
        "order": max_order,
        "steps": list(source.CM_STEPS),
        "quadrature.abs_tol": source.QUAD_ABS_TOL,
        "quadrature.rel_tol": source.QUAD_REL_TOL,
        "quadrature.small_t_cutoff": source.SMALL_T_CUTOFF,
        "quadrature.max_subdivisions": source.MAX_SUBDIVISIONS,
    }
    if command is Command.CERTIFY:
        defaults.update(
            {
                "grid.min": source.CM_GRID_MIN,
                "grid.max": source.CM_GRID_MAX,
                "grid.points": source.CM_GRID_POINTS,
                "grid.log": True,
            }
        )
    elif command is not Command.BOUNDS:
        defaults.update(
            {
                "grid.min": source.GRID_MIN,
                "grid.max": source.GRID_MAX,
                "grid.points": source.GRID_POINTS,
                "grid.log": source.GRID_LOG,
            }
        )
    if command is Command.IDENTITIES:
        defaults["tol"] = source.IDENTITY_TOL
    return defaults


def _grid_values(merged: Mapping[str, Any]) -> Optional[Dict[str, Any]]:
    keys: List[str] = ["min", "max", "points", "log"]
    if not any(f"grid.{k}" in merged for k in keys):
        return None
    grid: Dict[str, Any] = {k: merged[f"grid.{k}"] for k in keys if f"grid.{k}" in merged}
    # A partial grid on a command without a default grid is completed from the evaluation grid.
    s: Settings = get_settings()
    grid.setdefault("min", s.GRID_MIN)
    grid.setdefault("max", s.GRID_MAX)
    grid.setdefault("points", s.GRID_POINTS)
    return grid


def build_run_config(
    command: str,
    flags: Optional[Mapping[str, Any]] = None,
    config_file: Optional[Path] = None,
    source: Optional[Settings] = None,
) -> RunConfig:
    """
    Merge flags, config file and settings into a validated RunConfig.

    Args:
        command: Sub-command name.
        flags: Dotted keys from the command line; None values are ignored.
        config_file: Optional flat key=value file.
        source: Settings to take defaults from; the global settings when omitted.

    Returns:
        RunConfig.

    Raises:
        ConfigurationError: Naming the first invalid field.
    """
    source = source or get_settings()
    file_values: Dict[str, Any] = parse_config_file(config_file) if config_file else {}
    given: Dict[str, Any] = {**file_values, **{k: v for k, v in (flags or {}).items() if v is not None}}

    try:
        cmd: Command = Command(command)
        method: Method = Method(given.get("method", Method.DIFFERENCE.value))
    except ValueError as e:
        raise ConfigurationError("method" if "method" in given else "command", str(e)) from e

    merged: Dict[str, Any] = {**_settings_defaults(cmd, method, source), **given}
    data: Dict[str, Any] = {
        "command": cmd,
        "method": method,
        "grid": _grid_values(merged),
        "max_order": merged["order"],
        "steps": merged["steps"],
        "tol": merged.get("tol"),
        "out": merged.get("out"),
        "quadrature": {
            "abs_tol": merged["quadrature.abs_tol"],
            "rel_tol": merged["quadrature.rel_tol"],
            "small_t_cutoff": merged["quadrature.small_t_cutoff"],
            "max_subdivisions": merged["quadrature.max_subdivisions"],
        },
    }
    if "alpha" in merged:
        data["alphas"] = merged["alpha"]

    try:
        cfg: RunConfig = RunConfig(**data)
    except ValidationError as e:
        first = e.errors()[0]
        loc: List[str] = [str(part) for part in first["loc"]]
        if loc and loc[0] not in NESTED_FIELDS:
            loc = [FIELD_ALIASES.get(loc[0], loc[0])]
        field: str = ".".join(loc) or "config"
        logger.error(f"Configuration rejected at '{field}': {first['msg']}")
        raise ConfigurationError(field, first["msg"]) from e
    logger.debug(f"Resolved run configuration: {cfg.model_dump(mode='json')}")
    return cfg
