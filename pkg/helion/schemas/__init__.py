"""
Validated configuration models
"""

from .config import (
    AcquisitionConfig,
    LossModel,
    MeanStrategy,
    PhotonBudget,
    Priors,
    ProbeBasis,
    SystemConfig,
)

__all__ = [
    "AcquisitionConfig",
    "LossModel",
    "MeanStrategy",
    "PhotonBudget",
    "Priors",
    "ProbeBasis",
    "SystemConfig",
]
