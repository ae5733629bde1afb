"""Risk report schemas, the flat records the CLI serializes."""

from __future__ import annotations

from pydantic import BaseModel, Field, field_validator


class RiskReport(BaseModel):
    family: str
    mu: float
    sigma: float
    p: float
    q: float
    x_p: float
    x_q: float
    dte: float | None = None
    dtv: float | None = None
    dts: float | None = None
    dtk: float | None = None
    dtm: dict[int, float] = Field(default_factory=dict)
    warnings: list[str] = Field(default_factory=list)

    @field_validator("dtv")
    @classmethod
    def _variance_non_negative(cls, value: float | None) -> float | None:
        if value is not None and value < 0.0:
            raise ValueError(f"dtv must be non-negative, got {value}")
        return value


class OracleComparison(BaseModel):
    measure: str
    closed_form: float
    oracle: float
    relative_error: float
    warnings: list[str] = Field(default_factory=list)


class OracleSummary(BaseModel):
    family: str
    p: float
    q: float
    tolerance: float
    comparisons: list[OracleComparison]
    max_relative_error: float
    passed: bool


class FitSummary(BaseModel):
    names: list[str]
    n_obs: int
    mean: list[float]
    covariance: list[list[float]]
