"""Configuration management for gsdo."""

from functools import lru_cache
from pathlib import Path
from typing import Optional, Union

from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from gsdo.exceptions import ConfigError
from gsdo.models import GcParams, Scenario


class Settings(BaseSettings):
    """Process configuration settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Server Configuration
    gsdo_port: int = Field(default=27160, alias="GSDO_PORT")
    gsdo_host: str = Field(default="127.0.0.1", alias="GSDO_HOST")

    # Debug and Logging
    debug: bool = Field(default=False, alias="GSDO_DEBUG")
    log_level: str = Field(default="INFO", alias="GSDO_LOG_LEVEL")

    # Benchmark parallelism (0 = one worker per CPU)
    workers: int = Field(default=0, ge=0, alias="GSDO_WORKERS")

    # History Configuration
    max_history_entries: int = Field(default=20, ge=0, alias="GSDO_MAX_HISTORY_ENTRIES")
    history_path: Path = Field(default=Path(".history/runs.json"), alias="GSDO_HISTORY_PATH")

    # External problem subprocess timeout (seconds)
    external_timeout: float = Field(default=30.0, gt=0, alias="GSDO_EXTERNAL_TIMEOUT")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"GSDO_LOG_LEVEL must be one of {valid_levels}")
        return v.upper()


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


class SolverConfig(BaseModel):
    """Algorithm parameters.

    Fields left as None depend on the problem dimension and are filled in by
    :meth:`resolve`.
    """

    t_max: Optional[int] = Field(default=None, ge=1, description="Expensive evaluation budget")
    t_lh: Optional[int] = Field(default=None, ge=1, description="Initial LHS design size")

    # classification constraint
    c1: float = 1.0
    c2: float = -1.0
    c3: float = -10.0
    c4: float = -100.0
    k_neighbors: int = 3

    # random ball fallback
    delta_r: float = Field(default=10.0, gt=0)
    delta_d: float = Field(default=100.0, gt=0)

    eta_max: Optional[int] = Field(default=None, ge=1, description="Feasible points wanted in stage 2")
    k_global: Optional[int] = Field(default=None, ge=0, description="Stage-3 iterations before exploitation")
    k_max: Optional[int] = Field(default=None, ge=1, description="Stage-2 iteration cap")
    c_g: float = Field(default=0.5, description="Exploitation probability")
    delta_min: float = Field(default=1e-5, description="Exploration distance floor")

    # differential evolution
    de_population: Optional[int] = Field(default=None, ge=5)
    de_mutation: float = Field(default=0.7, gt=0, le=2)
    de_recombination: float = Field(default=0.9, ge=0, le=1)
    de_budget_per_dim: int = Field(default=4000, ge=1)
    de_tol: float = Field(default=1e-6, ge=0, description="DE relative convergence tolerance")
    de_atol: float = Field(default=1e-9, ge=0, description="DE absolute convergence tolerance")
    p4_starts: Optional[int] = Field(default=None, ge=1)

    center_cap_per_dim: int = Field(default=60, ge=1)
    feasibility_tol: float = Field(default=1e-6, ge=0)
    seed: int = Field(default=0, ge=0)

    @property
    def gc_params(self) -> GcParams:
        try:
            return GcParams(
                c1=self.c1, c2=self.c2, c3=self.c3, c4=self.c4, k_neighbors=self.k_neighbors
            )
        except ValidationError as e:
            raise ConfigError(f"Invalid classification scores: {e}") from e

    def resolve(self, d: int) -> "SolverConfig":
        """Fill dimension-dependent defaults for a d-dimensional problem and validate."""
        eta_max = self.eta_max if self.eta_max is not None else d + 1
        resolved = self.model_copy(
            update={
                "t_max": self.t_max if self.t_max is not None else 15 * (d + 1),
                "t_lh": self.t_lh if self.t_lh is not None else 2 * (d + 1),
                "eta_max": eta_max,
                "k_global": self.k_global if self.k_global is not None else d + 1,
                "k_max": self.k_max if self.k_max is not None else 5 * eta_max,
                "p4_starts": self.p4_starts if self.p4_starts is not None else min(10, d + 2),
            }
        )
        if not resolved.t_max >= resolved.t_lh >= d + 1:
            raise ConfigError(
                f"Need t_max >= t_lh >= d+1, got t_max={resolved.t_max}, "
                f"t_lh={resolved.t_lh}, d={d}"
            )
        if not 0.0 <= resolved.c_g <= 1.0:
            raise ConfigError(f"c_g must lie in [0, 1], got {resolved.c_g}")
        if not resolved.delta_min > 0:
            raise ConfigError(f"delta_min must be positive, got {resolved.delta_min}")
        resolved.gc_params
        return resolved


def default_budget(d: int, scenario: Union[Scenario, str, int]) -> int:
    """15(d+1) for Set1, 30(d+1) for the harder scenarios."""
    scenario = Scenario.parse(scenario)
    return (15 if scenario == Scenario.SET1 else 30) * (d + 1)


def load_solver_config(path: Optional[Union[str, Path]] = None, **overrides) -> SolverConfig:
    """
    Build a SolverConfig from a key=value file plus keyword overrides.

    Keys are case-insensitive, blank values are skipped, unknown keys are an
    error. Overrides whose value is None are ignored.
    """
    values = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")
        for key, value in dotenv_values(path).items():
            if value is None or value.strip() == "":
                continue
            values[key.strip().lower()] = value.strip()

    values.update({k: v for k, v in overrides.items() if v is not None})

    unknown = sorted(set(values) - set(SolverConfig.model_fields))
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")

    try:
        return SolverConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid solver config: {e}") from e
