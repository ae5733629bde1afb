"""dtmrisk configuration loaded from environment variables."""

from __future__ import annotations

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Numerical tolerances and runtime knobs, overridable from .env."""

    # Production quadrature
    quad_epsabs: float = Field(default=1e-12, alias="DTM_QUAD_EPSABS")
    quad_epsrel: float = Field(default=1e-12, alias="DTM_QUAD_EPSREL")
    quad_limit: int = Field(default=200, alias="DTM_QUAD_LIMIT")

    # Quantiles and windows
    quantile_xtol: float = Field(default=1e-12, alias="DTM_QUANTILE_XTOL")
    degenerate_mass: float = Field(default=1e-12, alias="DTM_DEGENERATE_MASS")
    conditioning_margin: float = Field(default=0.5, alias="DTM_CONDITIONING_MARGIN")
    cancellation_tolerance: float = Field(default=1e-9, alias="DTM_CANCELLATION_TOLERANCE")

    # Special functions
    hurwitz_terms: int = Field(default=50, alias="DTM_HURWITZ_TERMS")

    # Oracle
    oracle_epsabs: float = Field(default=1e-10, alias="DTM_ORACLE_EPSABS")
    oracle_panels: int = Field(default=256, alias="DTM_ORACLE_PANELS")
    oracle_nodes: int = Field(default=32, alias="DTM_ORACLE_NODES")
    oracle_rule_tolerance: float = Field(default=1e-9, alias="DTM_ORACLE_RULE_TOLERANCE")
    oracle_tolerance: float = Field(default=1e-6, alias="DTM_ORACLE_TOLERANCE")
    sampling_draws: int = Field(default=10_000_000, alias="DTM_SAMPLING_DRAWS")
    sampling_seed: int = Field(default=20131104, alias="DTM_SAMPLING_SEED")

    # Sweeps and output
    sweep_workers: int = Field(default=4, alias="DTM_SWEEP_WORKERS")
    output_digits: int = Field(default=12, alias="DTM_OUTPUT_DIGITS")

    # Logging
    log_level: str = Field(default="WARNING", alias="DTM_LOG_LEVEL")

    model_config = {"env_file": ".env", "env_file_encoding": "utf-8", "extra": "ignore"}


settings = Settings()
