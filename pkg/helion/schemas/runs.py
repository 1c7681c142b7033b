"""
Per-command run configurations for the CLI
"""

import re
from typing import Dict, List, Optional, Sequence

from pydantic import Field, field_validator, model_validator

from .config import SEED_MAX, AcquisitionConfig, MeanStrategy, PhotonBudget, Priors, StrictModel

STATE_PATTERN = re.compile(r"^(optimal|average|eigen:\d+)$")


def _check_state(v: str) -> str:
    if not STATE_PATTERN.match(v):
        raise ValueError(f"state must be 'optimal', 'average' or 'eigen:<index>', got {v!r}")
    return v


class TargetOptics(StrictModel):
    """Target area and imaging optics, in consistent length units"""

    area: float = Field(..., ge=0.0)
    numerical_aperture: float = Field(..., ge=0.0)
    wavelength: float = Field(..., gt=0.0)


class SpectrumRun(StrictModel):
    pair: Optional[str] = None
    photons: float = Field(1.0, ge=0.0)
    save_eigenstates: bool = False
    optics: Optional[TargetOptics] = None


class BoundsRun(StrictModel):
    photons: List[float] = Field(default_factory=list)
    budgets: List[PhotonBudget] = Field(default_factory=list)
    d12sq: List[float] = Field(..., min_length=1)
    priors: Priors = Field(default_factory=Priors)
    sigma_sq: Optional[float] = Field(None, gt=0.0)
    n_rep: int = Field(4000, ge=1)

    @field_validator("photons")
    @classmethod
    def photons_nonnegative(cls, v: List[float]) -> List[float]:
        if any(n < 0 for n in v):
            raise ValueError("photon numbers must be nonnegative")
        return v

    @field_validator("d12sq")
    @classmethod
    def distance_in_range(cls, v: List[float]) -> List[float]:
        if any(d < 0 or d > 4 for d in v):
            raise ValueError("d12sq values must lie in [0, 4]")
        return v

    @model_validator(mode="after")
    def some_photons(self) -> "BoundsRun":
        if not self.photons and not self.budgets:
            raise ValueError("give 'photons' or 'budgets'")
        return self


class TrialSettings(StrictModel):
    """Fields shared by the trials and sweep commands"""

    pair: Optional[str] = None
    reference: Optional[str] = None
    priors: Priors = Field(default_factory=Priors)
    sigma_sq: Optional[float] = Field(None, gt=0.0)
    n_rep: int = Field(4000, ge=1)
    mean_strategy: MeanStrategy = MeanStrategy.ORACLE_MEANS
    leave_one_out: bool = False
    fixed_split: bool = False
    seed: int = Field(0, ge=0, le=SEED_MAX)

    @model_validator(mode="after")
    def reference_when_needed(self):
        if self.mean_strategy == MeanStrategy.REFERENCE_MEANS and not self.reference:
            raise ValueError("reference_means needs a 'reference' pair directory")
        return self


class TrialsRun(TrialSettings):
    state: str = "optimal"
    photons: float = Field(..., ge=0.0)

    @field_validator("state")
    @classmethod
    def state_valid(cls, v: str) -> str:
        return _check_state(v)


class SweepRun(TrialSettings):
    states: List[str] = Field(default_factory=lambda: ["optimal", "average"], min_length=1)
    photons: List[float] = Field(default_factory=list)
    photons_by_state: Dict[str, List[float]] = Field(default_factory=dict)
    budgets: List[PhotonBudget] = Field(default_factory=list)
    eta_d: float = Field(1.0, gt=0.0)

    @field_validator("states")
    @classmethod
    def states_valid(cls, v: List[str]) -> List[str]:
        return [_check_state(s) for s in v]

    @model_validator(mode="after")
    def grid_for_every_state(self) -> "SweepRun":
        for state in self.states:
            grid = self.photons_by_state.get(state, self.photons)
            if not grid and (state in self.photons_by_state or not self.budgets):
                raise ValueError(f"no photon grid for state {state!r}")
            if any(n < 0 for n in grid):
                raise ValueError("photon numbers must be nonnegative")
        unknown = set(self.photons_by_state) - set(self.states)
        if unknown:
            raise ValueError(f"photons_by_state names unknown states: {sorted(unknown)}")
        return self

    def grid(self, state: str, budgeted: Sequence[float] = ()) -> List[float]:
        """Photon numbers for one state; budget-derived values extend the shared grid"""
        if state in self.photons_by_state:
            return self.photons_by_state[state]
        return self.photons + list(budgeted)


class AcquireRun(StrictModel):
    pair: Optional[str] = None
    acquisition: AcquisitionConfig = Field(default_factory=AcquisitionConfig)
    states: List[str] = Field(default_factory=lambda: ["optimal", "average"])
    photons: List[float] = Field(default_factory=lambda: [1.0, 10.0, 100.0])

    @field_validator("photons")
    @classmethod
    def photons_nonnegative(cls, v: List[float]) -> List[float]:
        if any(n < 0 for n in v):
            raise ValueError("photon numbers must be nonnegative")
        return v

    @field_validator("states")
    @classmethod
    def states_valid(cls, v: List[str]) -> List[str]:
        return [_check_state(s) for s in v]
