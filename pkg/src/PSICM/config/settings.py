import logging
import math
from typing import Any, Dict, List

from pydantic import ValidationInfo, computed_field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.PSICM.core.kernels import QuadratureConfig

# Configure logger
logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """
    Numerical defaults for the psi/theta toolkit.

    Values come from environment variables or a .env file and seed every
    command-line run; flags and --config files override them per run.

    Attributes:
        LOG_LEVEL: Application logging level.
        QUAD_ABS_TOL: Absolute tolerance of Laplace quadrature.
        QUAD_REL_TOL: Relative tolerance of Laplace quadrature.
        SMALL_T_CUTOFF: Below this t the kernels switch to Taylor series.
        MAX_SUBDIVISIONS: Bisection budget of the adaptive quadrature.
        GRID_MIN: Left end of the evaluation grid.
        GRID_MAX: Right end of the evaluation grid.
        GRID_POINTS: Number of evaluation abscissae.
        GRID_LOG: Log spacing when true, linear otherwise.
        CM_GRID_MIN: Left end of the complete-monotonicity grid.
        CM_GRID_MAX: Right end of the complete-monotonicity grid.
        CM_GRID_POINTS: Points of the complete-monotonicity grid.
        CM_MAX_ORDER: Highest finite-difference order of a sweep.
        CM_STEPS: Finite-difference step sizes of a sweep.
        BOUND_GRID_POINTS: Points per bound when verifying the catalog.
        IDENTITY_TOL: Residual tolerance of the identity suite.

    Example:
        >>> from src.PSICM.config.settings import settings
        >>> settings.DEFAULT_QUADRATURE.abs_tol
        1e-11
    """

    model_config: SettingsConfigDict = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        case_sensitive=False,
        validate_default=True,
    )

    # Runtime Configuration
    LOG_LEVEL: str = "INFO"

    # Quadrature
    QUAD_ABS_TOL: float = 1e-11
    QUAD_REL_TOL: float = 1e-10
    SMALL_T_CUTOFF: float = 1e-2
    MAX_SUBDIVISIONS: int = 60

    # Evaluation grid
    GRID_MIN: float = 1e-2
    GRID_MAX: float = 1e2
    GRID_POINTS: int = 13
    GRID_LOG: bool = True

    # Certification
    CM_GRID_MIN: float = 1e-3
    CM_GRID_MAX: float = 1e3
    CM_GRID_POINTS: int = 60
    CM_MAX_ORDER: int = 10
    CM_STEPS: List[float] = [0.25, 1.0]
    BOUND_GRID_POINTS: int = 200
    IDENTITY_TOL: float = 1e-8

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate and normalize log level."""
        valid_levels: List[str] = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Invalid log level: {v}. Valid levels: {', '.join(valid_levels)}")
        return v.upper()

    @field_validator("QUAD_ABS_TOL", "QUAD_REL_TOL", "IDENTITY_TOL")
    @classmethod
    def validate_tolerance(cls, v: float, info: ValidationInfo) -> float:
        """Tolerances must be positive; below 1e-15 binary64 cannot deliver them."""
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError(f"{info.field_name} must be finite and > 0")
        if v < 1e-15:
            logger.warning(f"{info.field_name}={v:g} is below what double precision can achieve")
        return v

    @field_validator("SMALL_T_CUTOFF")
    @classmethod
    def validate_cutoff(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("SMALL_T_CUTOFF must lie in (0, 1)")
        if v > 0.1:
            logger.warning("SMALL_T_CUTOFF above 0.1 truncates the kernel series noticeably")
        return v

    @field_validator("MAX_SUBDIVISIONS")
    @classmethod
    def validate_subdivisions(cls, v: int) -> int:
        if v < 1:
            raise ValueError("MAX_SUBDIVISIONS must be at least 1")
        if v > 10_000:
            logger.warning("MAX_SUBDIVISIONS is set very high, failing integrals will be slow to report")
        return v

    @field_validator("GRID_MIN", "CM_GRID_MIN")
    @classmethod
    def validate_grid_min(cls, v: float, info: ValidationInfo) -> float:
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError(f"{info.field_name} must be finite and > 0")
        return v

    @field_validator("GRID_MAX", "CM_GRID_MAX")
    @classmethod
    def validate_grid_max(cls, v: float, info: ValidationInfo) -> float:
        lower_name: str = info.field_name.replace("MAX", "MIN")
        lower: float = info.data.get(lower_name, 0.0)
        if not math.isfinite(v) or v < lower:
            raise ValueError(f"{info.field_name} must be finite and >= {lower_name}")
        return v

    @field_validator("GRID_POINTS", "CM_GRID_POINTS", "BOUND_GRID_POINTS")
    @classmethod
    def validate_points(cls, v: int, info: ValidationInfo) -> int:
        if v < 1:
            raise ValueError(f"{info.field_name} must be at least 1")
        if v > 100_000:
            logger.warning(f"{info.field_name}={v} makes every sweep slow")
        return v

    @field_validator("CM_MAX_ORDER")
    @classmethod
    def validate_max_order(cls, v: int) -> int:
        if not 0 <= v <= 12:
            raise ValueError("CM_MAX_ORDER must lie in [0, 12]")
        return v

    @field_validator("CM_STEPS")
    @classmethod
    def validate_steps(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("CM_STEPS must not be empty")
        if any(not math.isfinite(h) or h <= 0.0 for h in v):
            raise ValueError("CM_STEPS must contain finite positive steps")
        return sorted(v)

    @computed_field
    @property
    def IS_DEBUG_MODE(self) -> bool:
        """Check if application is in debug mode."""
        return self.LOG_LEVEL == "DEBUG"

    @computed_field
    @property
    def DEFAULT_QUADRATURE(self) -> QuadratureConfig:
        """Quadrature settings assembled from the QUAD_* fields."""
        return QuadratureConfig.from_settings(self)

    def is_configuration_valid(self) -> bool:
        """
        Cross-check fields that are only meaningful together.

        Returns:
            True if configuration is valid, False otherwise.
        """
        if self.GRID_POINTS == 1 and self.GRID_MIN != self.GRID_MAX:
            logger.error("GRID_POINTS=1 requires GRID_MIN == GRID_MAX")
            return False
        if self.CM_GRID_POINTS < 2:
            logger.error("CM_GRID_POINTS must be at least 2 for a sweep")
            return False
        if self.QUAD_REL_TOL < 50 * 2.220446049250313e-16 and self.QUAD_ABS_TOL < 1e-300:
            logger.error("Quadrature tolerances are below the rounding floor of the panel rule")
            return False
        logger.info("Configuration validated successfully")
        return True

    def get_config_summary(self) -> Dict[str, Any]:
        """
        Get the numeric configuration as a plain dictionary for logging.

        Returns:
            Field values, without computed fields.
        """
        return self.model_dump(exclude={"IS_DEBUG_MODE", "DEFAULT_QUADRATURE"})

    def __str__(self) -> str:
        """String representation of settings."""
        return f"Settings(grid=[{self.GRID_MIN:g}, {self.GRID_MAX:g}], points={self.GRID_POINTS})"

    def __repr__(self) -> str:
        """Detailed representation of settings."""
        return (f"Settings(QUAD_ABS_TOL={self.QUAD_ABS_TOL!r}, "
                f"QUAD_REL_TOL={self.QUAD_REL_TOL!r}, "
                f"LOG_LEVEL='{self.LOG_LEVEL}')")


# Global settings instance
settings = Settings()

# Validate configuration on startup
if settings.is_configuration_valid():
    logger.info("PSICM settings initialized", extra={"config": settings.get_config_summary()})
else:
    logger.warning(
        "PSICM settings initialized with configuration issues",
        extra={"config": settings.get_config_summary()},
    )


def reload_settings() -> Settings:
    """
    Reload settings from environment and .env file.

    Returns:
        Reloaded settings instance.
    """
    global settings
    settings = Settings()
    settings.is_configuration_valid()
    logger.info("Settings reloaded from environment")
    return settings


def get_settings() -> Settings:
    """Current global settings, including after reload_settings()."""
    return settings
