"""
Data models for the meanscale library.
"""
import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Direction(str, Enum):
    """Monotonicity of a generator."""
    INCREASING = "Increasing"
    DECREASING = "Decreasing"


class ScaleDirection(str, Enum):
    """Monotonicity of a family of means in its parameter."""
    INCREASING = "IncreasingScale"
    DECREASING = "DecreasingScale"


class Interval(BaseModel):
    """Open interval (low, high); either end may be infinite."""
    model_config = ConfigDict(frozen=True)

    low: float = Field(..., description="Lower end (excluded)")
    high: float = Field(..., description="Upper end (excluded)")

    @model_validator(mode="after")
    def _ordered(self) -> "Interval":
        if math.isnan(self.low) or math.isnan(self.high) or not self.low < self.high:
            raise ValueError(f"interval ends must satisfy low < high, got ({self.low}, {self.high})")
        return self

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(low=-math.inf, high=math.inf)

    @classmethod
    def positive(cls) -> "Interval":
        return cls(low=0.0, high=math.inf)

    def contains(self, x: float) -> bool:
        return self.low < x < self.high

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.low) and math.isfinite(self.high)

    def __str__(self) -> str:
        return f"({self.low:g}, {self.high:g})"


class SolveReport(BaseModel):
    """Outcome of the inverse problem: which parameter puts the mean at c."""
    model_config = ConfigDict(frozen=True)

    family: str = Field(..., description="Name of the scale family")
    alpha: float = Field(..., description="Solved parameter in the solver coordinate (ln alpha for radical)")
    achieved_mean: float = Field(..., description="m_alpha(a, b) at the solved parameter")
    target: float = Field(..., description="Prescribed interior point c")
    residual: float = Field(..., description="|achieved_mean - c|")
    iterations: int = Field(..., description="Bracket doublings plus Brent iterations")
    bracket: Tuple[float, float] = Field(..., description="Final parameter bracket containing the root")


class ScaleViolation(BaseModel):
    """A consecutive pair of grid parameters whose means break the declared direction."""
    model_config = ConfigDict(frozen=True)

    alpha_lo: float
    alpha_hi: float
    mean_lo: float
    mean_hi: float


class ScaleReport(BaseModel):
    """Result of sampling a family of means over a parameter grid."""
    model_config = ConfigDict(frozen=True)

    family: str = Field(..., description="Name of the scale family")
    declared: ScaleDirection = Field(..., description="Direction the family claims")
    observed: Optional[ScaleDirection] = Field(
        None, description="Direction seen on the grid, None if the means are not monotone"
    )
    violations: List[ScaleViolation] = Field(default_factory=list, description="Offending parameter pairs")
    mean_range: Tuple[float, float] = Field(..., description="Smallest and largest sampled mean")
    samples: int = Field(..., description="Number of grid parameters evaluated")

    @property
    def ok(self) -> bool:
        return not self.violations and self.observed == self.declared


class LimitProbe(BaseModel):
    """Means at the two extreme parameters of a family."""
    model_config = ConfigDict(frozen=True)

    family: str
    alpha_big: float = Field(..., gt=0, description="Magnitude of the probed parameter")
    at_negative: float = Field(..., description="Mean at -alpha_big")
    at_positive: float = Field(..., description="Mean at +alpha_big")
    low: float = Field(..., description="min{a, b}")
    high: float = Field(..., description="max{a, b}")

    def as_pair(self) -> Tuple[float, float]:
        return self.at_negative, self.at_positive


class DualMeanRecord(BaseModel):
    """The same centroid written in the primal (theta) and dual (eta) charts."""
    model_config = ConfigDict(frozen=True)

    theta_mean: float = Field(..., description="m_h(a, b) in theta coordinates")
    eta_mean: float = Field(..., description="m_h_dual(f'(a), f'(b)) in eta coordinates")
    transported_eta: float = Field(..., description="f'(theta_mean)")
    arc_primal: float = Field(..., description="h(theta_mean), base-point aligned")
    arc_dual: float = Field(..., description="h_dual(eta_mean), base-point aligned")

    @property
    def eta_residual(self) -> float:
        """|f'(theta_mean) - eta_mean|, relative for |eta_mean| >= 1 and absolute below (eta may be 0)."""
        return abs(self.transported_eta - self.eta_mean) / max(1.0, abs(self.eta_mean))

    @property
    def arc_residual(self) -> float:
        """Arc-coordinate disagreement, normalized like eta_residual; the aligned arcs vanish at the base point."""
        return abs(self.arc_primal - self.arc_dual) / max(1.0, abs(self.arc_primal))

    def consistent(self, tol: float) -> bool:
        return self.eta_residual <= tol and self.arc_residual <= tol


class ScanRow(BaseModel):
    """One row of a parameter scan."""
    model_config = ConfigDict(frozen=True)

    alpha: float
    mean: float

    @field_validator("mean")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"scan produced a non-finite mean: {value}")
        return value
