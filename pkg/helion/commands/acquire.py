"""
acquire: virtual TM acquisition of a pair and probe-field fidelity
"""

import argparse
import logging
from typing import Any, Dict, List

from helion.models.storage import save_pair, spectrum_frame, write_json, write_table
from helion.schemas.runs import AcquireRun
from helion.services.acquire import fidelity_report, measure_pair
from helion.services.bounds import theoretical_rate
from helion.services.discrim import build_discrimination_operator, enhancement, spectrum

from .common import echo_config, load_config, output_dir, resolve_pair, select_state

logger = logging.getLogger(__name__)


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("acquire", help="measure a pair under shot noise", parents=[parent])
    parser.set_defaults(handler=run)


def predicted_rates(report: Dict[str, Any], photons: List[float], sigma_sq: float) -> List[Dict[str, float]]:
    """Equal-prior P_G from the acquired d12² corrected by the η_d seen in the probe fields"""
    d12sq = min(max(report["d12sq_acquired"], 0.0), 4.0)
    eta = 1.0 if report["eta_d_fields"] is None else report["eta_d_fields"]
    return [{"n": n, "P_G": theoretical_rate(n, d12sq, eta, sigma_sq)} for n in photons]


def run(args: argparse.Namespace) -> int:
    config = load_config(args, AcquireRun, {"pair": args.pair})
    if args.seed is not None:
        acquisition = config.acquisition.model_copy(update={"seed": args.seed})
        config = config.model_copy(update={"acquisition": acquisition})
    pair = resolve_pair(config.pair)
    cfg = config.acquisition

    measured = measure_pair(pair, cfg)
    out = output_dir(args)
    save_pair(out / "measured", measured)
    measured_spec = spectrum(build_discrimination_operator(measured), strict=False)
    true_spec = spectrum(build_discrimination_operator(pair))
    write_table(out / "spectrum", spectrum_frame(measured_spec), "spectrum")

    # states are chosen from the acquired operator, as an experimenter would
    reports = [
        fidelity_report(pair, measured, select_state(measured_spec, label, 1.0), cfg)
        for label in config.states
    ]
    for report in reports:
        report["predicted_rates"] = predicted_rates(report, config.photons, cfg.sigma_sq)
    write_json(
        out / "fidelity.json",
        {
            "states": reports,
            "lambda_1_true": float(true_spec.eigenvalues[0]),
            "lambda_1_acquired": float(measured_spec.eigenvalues[0]),
            "enhancement_true": enhancement(true_spec),
            "enhancement_acquired": enhancement(measured_spec),
        },
    )
    echo_config(out, "acquire", config)
    print(f"measured pair written to {out / 'measured'}")
    for report in reports:
        eta = report["eta_d"]
        print(
            f"{report['state']}: |C1|={report['corr_1']:.4f} |C2|={report['corr_2']:.4f} "
            f"eta_d={'n/a' if eta is None else f'{eta:.4f}'}"
        )
    return 0
