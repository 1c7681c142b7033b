"""
CLI subcommand registry
"""

import argparse

from helion.core.rng import seed_sequence

from . import acquire, bounds, spectrum, sweep, synth, trials

# Registration order is the order shown in --help
COMMANDS = (synth, spectrum, bounds, trials, sweep, acquire)


def _seed(value: str) -> int:
    try:
        seed = int(value)
        seed_sequence(seed)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {value!r}") from exc
    return seed


def common_options() -> argparse.ArgumentParser:
    """Flags shared by every subcommand"""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--out", help="output directory (default: HELION_OUTPUT_DIR)")
    parser.add_argument("--seed", type=_seed, help="override the configured seed")
    parser.add_argument("--format", choices=("csv", "json"), default="csv", help="table format")
    parser.add_argument("--pair", help="scattering-pair directory (overrides the config)")
    return parser


def register_all(subparsers) -> None:
    parent = common_options()
    for module in COMMANDS:
        module.register(subparsers, parent)
