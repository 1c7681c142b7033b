"""
bounds: Helstrom and Gaussian-receiver error over a (photons, d12sq) grid
"""

import argparse
import logging

import pandas as pd

from helion.core.config import settings
from helion.models.storage import write_table
from helion.schemas.runs import BoundsRun
from helion.services.bounds import binomial_ci, gaussian_receiver_error, helstrom_bound

from .common import budget_photons, echo_config, load_config, output_dir

logger = logging.getLogger(__name__)


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "bounds", help="tabulate closed-form error probabilities", parents=[parent]
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_config(args, BoundsRun)
    sigma_sq = config.sigma_sq or settings.SIGMA_SQ
    photons = config.photons + budget_photons(config.budgets)
    rows = []
    for d12sq in config.d12sq:
        for n in photons:
            p_g = gaussian_receiver_error(n, d12sq, sigma_sq, config.priors)
            lo, hi = binomial_ci(p_g, config.n_rep)
            rows.append(
                {
                    "n": n,
                    "d12sq": d12sq,
                    "P_H": helstrom_bound(n, d12sq, config.priors),
                    "P_G": p_g,
                    "ci_lo": lo,
                    "ci_hi": hi,
                }
            )
    out = output_dir(args)
    table = write_table(out / "bounds", pd.DataFrame(rows), "bounds", args.format)
    echo_config(out, "bounds", config)
    print(f"{len(rows)} grid points written to {table}")
    return 0
