"""
trials: one Monte Carlo batch of homodyne measurements
"""

import argparse
import logging

from helion.core.config import settings
from helion.models.storage import write_json, write_table
from helion.schemas.runs import TrialsRun
from helion.services.discrim import build_discrimination_operator, spectrum
from helion.services.receiver import run_trials

from .common import echo_config, load_config, output_dir, resolve_pair, select_state

logger = logging.getLogger(__name__)


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "trials", help="simulate and decide N_rep homodyne measurements", parents=[parent]
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_config(args, TrialsRun, {"pair": args.pair, "seed": args.seed})
    pair = resolve_pair(config.pair)
    reference = resolve_pair(config.reference, "reference") if config.reference else None
    spec = spectrum(build_discrimination_operator(pair))
    state = select_state(spec, config.state, config.photons)

    batch = run_trials(
        pair,
        state,
        config.priors,
        config.sigma_sq or settings.SIGMA_SQ,
        config.n_rep,
        config.mean_strategy,
        config.seed,
        leave_one_out=config.leave_one_out,
        fixed_split=config.fixed_split,
        reference=reference,
    )
    out = output_dir(args)
    table = write_table(out / "trials", batch.samples(), "trials", args.format)
    write_json(out / "summary.json", {**batch.summary(), "config": config.model_dump(mode="json")})
    echo_config(out, "trials", config)
    lo, hi = batch.ci
    print(f"trials written to {table}")
    print(f"error rate {batch.error_rate:.4f} [{lo:.4f}, {hi:.4f}], predicted {batch.predicted_error:.4f}")
    return 0
