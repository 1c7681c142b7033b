"""
Domain configuration schemas

Each model rejects unknown keys so a stored config echo always reproduces
the run it came from.
"""

import math
from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SEED_MAX = 2**64 - 1
PRIOR_TOL = 1e-12


class StrictModel(BaseModel):
    """Base schema: unknown keys are an error"""

    model_config = ConfigDict(extra="forbid")


class LossModel(str, Enum):
    UNITARY_EMBED = "unitary_embed"
    GINIBRE_SUBUNITARY = "ginibre_subunitary"


class ProbeBasis(str, Enum):
    CANONICAL = "canonical"
    PLANE_WAVE_LIKE = "plane_wave_like"


class MeanStrategy(str, Enum):
    ORACLE_MEANS = "oracle_means"
    EMPIRICAL_SUM_MEAN = "empirical_sum_mean"
    REFERENCE_MEANS = "reference_means"


class SystemConfig(StrictModel):
    """Synthetic diffuser-target-diffuser system"""

    m_in: int = Field(..., ge=1)
    n_out: int = Field(..., ge=1)
    n_plane: int = Field(..., ge=1)
    target_pixels: List[int] = Field(default_factory=list)
    target_transmittance: float = Field(1.0, ge=0.0, le=1.0)
    target_phase: float = 0.0
    loss_model: LossModel = LossModel.GINIBRE_SUBUNITARY
    seed: int = Field(0, ge=0, le=SEED_MAX)

    @field_validator("target_pixels")
    @classmethod
    def pixels_distinct(cls, v: List[int]) -> List[int]:
        if len(set(v)) != len(v):
            raise ValueError("target_pixels must not contain duplicates")
        if any(p < 0 for p in v):
            raise ValueError("target_pixels must be nonnegative")
        return v

    @field_validator("target_phase")
    @classmethod
    def phase_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("target_phase must be finite")
        return v

    @model_validator(mode="after")
    def check_geometry(self) -> "SystemConfig":
        if any(p >= self.n_plane for p in self.target_pixels):
            raise ValueError(f"target_pixels must lie in [0, {self.n_plane})")
        if self.loss_model == LossModel.UNITARY_EMBED and not (
            self.m_in == self.n_out == self.n_plane
        ):
            raise ValueError("unitary_embed requires m_in = n_out = n_plane")
        return self


class Priors(StrictModel):
    """A priori probabilities of target absent (pi1) and present (pi2)"""

    pi1: float = Field(0.5, ge=0.0, le=1.0)
    pi2: float = Field(0.5, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_sum(self) -> "Priors":
        if abs(self.pi1 + self.pi2 - 1.0) > PRIOR_TOL:
            raise ValueError(f"pi1 + pi2 must equal 1, got {self.pi1 + self.pi2!r}")
        return self

    @property
    def equal(self) -> bool:
        return self.pi1 == self.pi2

    @property
    def log_ratio(self) -> float:
        """ln(pi1/pi2), the likelihood-ratio threshold"""
        if self.pi1 <= 0.0 or self.pi2 <= 0.0:
            raise ValueError("likelihood-ratio threshold needs both priors > 0")
        return math.log(self.pi1 / self.pi2)

    def swapped(self) -> "Priors":
        return Priors(pi1=self.pi2, pi2=self.pi1)


class PhotonBudget(StrictModel):
    """Attenuation chain between the source and the sample"""

    n0: float = Field(..., ge=0.0)
    t_nd: float = Field(1.0, ge=0.0, le=1.0)
    t_va: float = Field(1.0, ge=0.0, le=1.0)
    t_mod: float = Field(1.0, ge=0.0, le=1.0)


class AcquisitionConfig(StrictModel):
    """Column-by-column transmission matrix measurement"""

    n0_per_column: float = Field(1e8, ge=0.0)
    probe_basis: ProbeBasis = ProbeBasis.CANONICAL
    sigma_sq: float = Field(0.5, gt=0.0)
    seed: int = Field(0, ge=0, le=SEED_MAX)
    phase_jitter: float = Field(0.0, ge=0.0)  # rad, per-column reference drift
    modulation_efficiency: float = Field(1.0, gt=0.0, le=1.0)  # shaped probes only
    repeats: int = Field(50, ge=1)
