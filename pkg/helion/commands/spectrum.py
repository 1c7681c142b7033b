"""
spectrum: eigenvalues of the discrimination operator and the optimal/average states
"""

import argparse
import logging

import pandas as pd

from helion.models.storage import spectrum_frame, write_cmx, write_json, write_table
from helion.schemas.runs import SpectrumRun
from helion.services.discrim import (
    average_state,
    build_discrimination_operator,
    enhancement,
    optimal_state,
    significant_modes,
    spectrum,
    unitary_phase_analysis,
)
from helion.services.scatter import target_intensity_fraction, target_mode_count

from .common import echo_config, load_config, output_dir, resolve_pair

logger = logging.getLogger(__name__)


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "spectrum", help="analyze the discrimination operator of a pair", parents=[parent]
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_config(args, SpectrumRun, {"pair": args.pair})
    pair = resolve_pair(config.pair)
    out = output_dir(args)

    spec = spectrum(build_discrimination_operator(pair))
    optimal = optimal_state(spec, config.photons)
    average = average_state(spec, config.photons)
    table = write_table(out / "spectrum", spectrum_frame(spec), "spectrum")
    write_cmx(out / "optimal_state.cmx", optimal.amplitudes)
    write_cmx(out / "average_state.cmx", average.amplitudes)
    if config.save_eigenstates:
        write_cmx(out / "eigenstates.cmx", spec.eigenstates)

    ratio = enhancement(spec)
    summary = {
        "dim": spec.dim,
        "lambda_1": float(spec.eigenvalues[0]),
        "mean_eigenvalue": spec.mean_eigenvalue,
        "enhancement": ratio,
        "significant_modes": significant_modes(spec),
        "unitary": pair.unitary,
    }
    if pair.a is not None and pair.config is not None and pair.config.target_pixels:
        summary["target_fraction"] = {
            state.label: target_intensity_fraction(pair, state) for state in (optimal, average)
        }
    if config.optics is not None:
        optics = config.optics
        summary["target_modes"] = target_mode_count(optics.area, optics.numerical_aperture, optics.wavelength)
    if pair.unitary:
        records = unitary_phase_analysis(pair, spec)
        phases = pd.DataFrame([vars(r) for r in records])
        phases.insert(0, "index", range(1, len(records) + 1))
        write_table(out / "phases", phases, "phases")
        summary["degenerate_states"] = int(phases["degenerate"].sum())
    write_json(out / "summary.json", summary)
    echo_config(out, "spectrum", config)

    print(f"spectrum written to {table}")
    print(f"Lambda_1 = {spec.eigenvalues[0]:.6g}, mean = {spec.mean_eigenvalue:.6g}")
    print(f"Lambda_1 / mean: {'undefined' if ratio is None else f'{ratio:.6g}'}")
    return 0
