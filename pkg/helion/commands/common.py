"""
Helpers shared by the CLI subcommands
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Type, TypeVar

from pydantic import BaseModel

from helion import __version__
from helion.core.config import settings
from helion.core.errors import ConfigValidationError
from helion.core.rng import GENERATOR_ID
from helion.models.storage import load_pair, read_json, write_json
from helion.schemas.config import PhotonBudget
from helion.services.bounds import effective_photons
from helion.services.discrim import (
    DiscriminationSpectrum,
    ProbeState,
    average_state,
    eigenstate,
    optimal_state,
)
from helion.services.scatter import ScatteringPair

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def load_config(
    args: argparse.Namespace, model: Type[ModelT], overrides: Optional[Dict[str, Any]] = None
) -> ModelT:
    """Read the JSON run config, apply CLI overrides, validate (unknown keys rejected)"""
    if args.config is None:
        data: Dict[str, Any] = {}
    else:
        data = read_json(args.config)
        if not isinstance(data, dict):
            raise ConfigValidationError(f"config must be a JSON object: {args.config}")
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return model.model_validate(data)


def output_dir(args: argparse.Namespace) -> Path:
    return Path(args.out or settings.OUTPUT_DIR)


def resolve_pair(path: Optional[str], role: str = "pair") -> ScatteringPair:
    if not path:
        raise ConfigValidationError(f"no {role} directory given (config '{role}' or --pair)")
    return load_pair(path)


def budget_photons(budgets: Sequence[PhotonBudget]) -> List[float]:
    """Photon numbers reaching the sample for each attenuation chain"""
    photons = [effective_photons(budget) for budget in budgets]
    for budget, n in zip(budgets, photons):
        logger.info(f"Budget n0={budget.n0:.4g} attenuates to n={n:.4g}")
    return photons


def select_state(spec: DiscriminationSpectrum, selector: str, photons: float) -> ProbeState:
    """'optimal', 'average' or 'eigen:<j>' (1-based, descending eigenvalue)"""
    if selector == "optimal":
        return optimal_state(spec, photons)
    if selector == "average":
        return average_state(spec, photons)
    return eigenstate(spec, int(selector.split(":", 1)[1]), photons)


def echo_config(directory: Path, command: str, config: BaseModel) -> None:
    """config.json: everything needed to reproduce the run"""
    write_json(
        directory / "config.json",
        {
            "command": command,
            "helion_version": __version__,
            "format_version": settings.FORMAT_VERSION,
            "generator": GENERATOR_ID,
            "config": config.model_dump(mode="json"),
        },
    )
