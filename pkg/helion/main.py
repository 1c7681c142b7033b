"""
Helion - command-line entry point
"""

import argparse
import logging
import sys
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from helion import __version__
from helion.commands import register_all
from helion.core.config import settings
from helion.core.errors import ConfigValidationError, HelionError, NumericError, StorageError

logger = logging.getLogger("helion")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helion",
        description="Optimal probe states for detecting hidden targets in scattering media",
    )
    parser.add_argument("--version", action="version", version=f"helion {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    register_all(subparsers)
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code"""
    configure_logging(settings.LOG_LEVEL)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which matches the config code
        return int(exc.code or 0)

    try:
        return args.handler(args)
    except ValidationError as exc:
        logger.error(f"Invalid configuration: {exc}")
        return ConfigValidationError.exit_code
    except HelionError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return exc.exit_code
    except np.linalg.LinAlgError as exc:
        logger.error(f"Linear algebra failure: {exc}")
        return NumericError.exit_code
    except OSError as exc:
        logger.error(f"I/O error: {exc}")
        return StorageError.exit_code


if __name__ == "__main__":
    sys.exit(main())
