"""
sweep: observed vs predicted error over a photon grid, one row per (state, n)
"""

import argparse
import logging
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from helion.core.config import settings
from helion.core.errors import NumericError
from helion.core.rng import child_seeds
from helion.models.storage import write_json, write_table
from helion.schemas.config import MeanStrategy, Priors
from helion.schemas.runs import SweepRun
from helion.services.bounds import decay_constant, helstrom_bound, theoretical_rate
from helion.services.discrim import (
    DiscriminationSpectrum,
    ProbeState,
    build_discrimination_operator,
    enhancement,
    spectrum,
)
from helion.services.receiver import run_trials
from helion.services.scatter import ScatteringPair

from .common import budget_photons, echo_config, load_config, output_dir, resolve_pair, select_state

logger = logging.getLogger(__name__)


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("sweep", help="run trials across a photon-number grid", parents=[parent])
    parser.set_defaults(handler=run)


def _point(
    pair: ScatteringPair,
    state: ProbeState,
    config: SweepRun,
    sigma_sq: float,
    seed: int,
    reference: Optional[ScatteringPair],
) -> Dict[str, Any]:
    batch = run_trials(
        pair,
        state,
        config.priors,
        sigma_sq,
        config.n_rep,
        config.mean_strategy,
        seed,
        leave_one_out=config.leave_one_out,
        fixed_split=config.fixed_split,
        reference=reference,
    )
    lo, hi = batch.ci
    return {
        "state": state.label,
        "n": state.photons,
        "d12sq": batch.d12sq,
        "P_H": helstrom_bound(state.photons, batch.d12sq, config.priors),
        "P_G": batch.predicted_error,
        "P_theory": theoretical_rate(state.photons, batch.d12sq, config.eta_d, sigma_sq),
        "rate": batch.error_rate,
        "ci_lo": lo,
        "ci_hi": hi,
        "detected_1": batch.detected_photons[0],
        "detected_2": batch.detected_photons[1],
        "seed": seed,
    }


def sweep_points(
    pair: ScatteringPair,
    spec: DiscriminationSpectrum,
    config: SweepRun,
    sigma_sq: float,
    reference: Optional[ScatteringPair] = None,
    n_jobs: int = 1,
) -> pd.DataFrame:
    """
    Evaluate every (state, n) grid point

    Point k (row order: states as listed, photons in the order given, then
    budget-derived photon numbers) runs on the k-th SeedSequence child of the
    sweep seed, reduced to one 64-bit word. P_theory is the equal-prior P_G
    with d12² scaled by the configured η_d.
    """
    budgeted = budget_photons(config.budgets)
    probes: List[ProbeState] = [
        select_state(spec, label, n) for label in config.states for n in config.grid(label, budgeted)
    ]
    seeds = [
        int(child.generate_state(1, dtype=np.uint64)[0])
        for child in child_seeds(config.seed, len(probes))
    ]
    rows = Parallel(n_jobs=n_jobs)(
        delayed(_point)(pair, probe, config, sigma_sq, seed, reference)
        for probe, seed in zip(probes, seeds)
    )
    return pd.DataFrame(rows)


def summarize(frame: pd.DataFrame, ratio: Optional[float], priors: Priors) -> Dict[str, Any]:
    """Fitted decay constants per state, compared with Λ1/Λ̄ for optimal vs average"""
    constants: Dict[str, Optional[float]] = {}
    for label, group in frame.groupby("state", sort=False):
        try:
            constants[label] = decay_constant(group["n"], group["rate"])
        except NumericError as exc:
            logger.warning(f"No decay constant for {label}: {exc}")
            constants[label] = None
    summary: Dict[str, Any] = {
        "decay_constants": constants,
        "enhancement": ratio,
        "priors": priors.model_dump(),
    }
    optimal, average = constants.get("optimal"), constants.get("average")
    if optimal is not None and average:
        summary["decay_ratio"] = optimal / average
    return summary


def run(args: argparse.Namespace) -> int:
    config = load_config(args, SweepRun, {"pair": args.pair, "seed": args.seed})
    pair = resolve_pair(config.pair)
    reference = resolve_pair(config.reference, "reference") if config.reference else None
    sigma_sq = config.sigma_sq or settings.SIGMA_SQ
    if config.mean_strategy != MeanStrategy.ORACLE_MEANS:
        logger.info(f"Sweep uses {config.mean_strategy.value} detection means")

    spec = spectrum(build_discrimination_operator(pair))
    frame = sweep_points(pair, spec, config, sigma_sq, reference, n_jobs=settings.THREADS)
    summary = summarize(frame, enhancement(spec), config.priors)

    out = output_dir(args)
    table = write_table(out / "sweep", frame, "sweep", args.format)
    write_json(out / "summary.json", summary)
    echo_config(out, "sweep", config)
    print(f"{len(frame)} sweep points written to {table}")
    for label, value in summary["decay_constants"].items():
        print(f"decay constant [{label}]: {'n/a' if value is None else f'{value:.6g}'}")
    return 0
