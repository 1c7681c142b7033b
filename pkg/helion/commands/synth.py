"""
synth: generate and persist a scattering pair
"""

import argparse
import logging

from helion.models.storage import save_pair
from helion.schemas.config import SystemConfig
from helion.services.scatter import gen_system

from .common import load_config, output_dir

logger = logging.getLogger(__name__)


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("synth", help="synthesize an (S1, S2) pair", parents=[parent])
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_config(args, SystemConfig, {"seed": args.seed})
    pair = gen_system(config)
    directory = save_pair(output_dir(args), pair)
    print(f"pair written to {directory}")
    print(f"S1, S2 shape: {pair.s1.shape[0]} x {pair.s1.shape[1]}; plane pixels: {config.n_plane}")
    print(f"sigma_max: {pair.sigma_max:.12f}; unitary: {pair.unitary}")
    return 0
