"""
Virtual transmission-matrix acquisition

Matrices are measured column by column under homodyne noise and normalized
by the per-column photon number; measured probe fields are compared with
their predictions through correlation and norm-ratio metrics.
"""

import logging
import math
from typing import Any, Dict, Optional, Tuple

import numpy as np

from helion.core.errors import ConfigValidationError, DimensionError
from helion.core.rng import make_rng, substreams
from helion.schemas.config import AcquisitionConfig, ProbeBasis
from helion.services.discrim import (
    DiscriminationSpectrum,
    ProbeState,
    build_discrimination_operator,
    spectrum,
)
from helion.services.linalg import ComplexMatrix, ComplexVector, as_vector, quadratic_form
from helion.services.receiver import measure, sample_homodyne
from helion.services.scatter import ScatteringPair

logger = logging.getLogger(__name__)


def probe_basis(dim: int, basis: ProbeBasis) -> ComplexMatrix:
    """Unitary matrix whose columns are the incident probes"""
    if basis == ProbeBasis.PLANE_WAVE_LIKE:
        return np.fft.fft(np.eye(dim)) / math.sqrt(dim)
    return np.eye(dim, dtype=np.complex128)


def _check(cfg: AcquisitionConfig) -> None:
    if cfg.n0_per_column <= 0:
        raise ConfigValidationError("acquisition needs a positive photon number per column")


def _jitter(samples: np.ndarray, cfg: AcquisitionConfig, rng: np.random.Generator) -> np.ndarray:
    # one global reference-phase error per frame (column)
    if cfg.phase_jitter <= 0:
        return samples
    phases = rng.normal(0.0, cfg.phase_jitter, samples.shape[-1])
    return samples * np.exp(1j * phases)[np.newaxis, :]


def measure_matrix(
    pair: ScatteringPair,
    hypothesis: int,
    cfg: AcquisitionConfig,
    rng: Optional[np.random.Generator] = None,
) -> ComplexMatrix:
    """
    Estimate S_hyp from one noisy homodyne frame per probe column

    Column j records √n0·S·p_j plus noise; dividing by √n0 and rotating back
    with the adjoint probe basis gives an unbiased estimate of S with
    variance σ²/n0 per quadrature and entry.
    """
    _check(cfg)
    rng = rng or make_rng(cfg.seed)
    s = pair.matrix(hypothesis)
    basis = probe_basis(s.shape[1], cfg.probe_basis)
    root = math.sqrt(cfg.n0_per_column)
    frames = sample_homodyne(root * (s @ basis), cfg.sigma_sq, rng)
    frames = _jitter(frames, cfg, rng)
    return (frames / root) @ basis.conj().T


def measure_pair(pair: ScatteringPair, cfg: AcquisitionConfig) -> ScatteringPair:
    """Acquire both matrices; sub-streams [hypothesis 1, hypothesis 2]"""
    rng1, rng2 = substreams(cfg.seed, 2)
    s1 = measure_matrix(pair, 1, cfg, rng1)
    s2 = measure_matrix(pair, 2, cfg, rng2)
    logger.info(
        f"Acquired {s1.shape} matrices at n0={cfg.n0_per_column:.3g} photons/column "
        f"({cfg.probe_basis.value} basis)"
    )
    return ScatteringPair.from_matrices(
        s1,
        s2,
        a=pair.a,
        b=pair.b,
        mask1=pair.mask1,
        mask2=pair.mask2,
        config=pair.config,
        generator=pair.generator,
        metadata={"acquisition": cfg.model_dump(mode="json")},
    )


def end_to_end_spectrum(pair: ScatteringPair, cfg: AcquisitionConfig) -> DiscriminationSpectrum:
    """Spectrum of the discrimination operator built from acquired matrices"""
    measured = measure_pair(pair, cfg)
    return spectrum(build_discrimination_operator(measured), strict=False)


def fidelity_metrics(predicted, measured) -> Tuple[float, float]:
    """|C| = |⟨pred|meas⟩|/(‖pred‖·‖meas‖) and R = ‖meas‖²/‖pred‖²"""
    predicted = as_vector(predicted, "predicted")
    measured = as_vector(measured, "measured")
    if predicted.shape != measured.shape:
        raise DimensionError(f"predicted {predicted.shape} and measured {measured.shape} differ")
    p_norm = float(np.linalg.norm(predicted))
    if p_norm == 0.0:
        raise ConfigValidationError("predicted field is zero")
    m_norm = float(np.linalg.norm(measured))
    if m_norm == 0.0:
        return 0.0, 0.0
    corr = abs(np.vdot(predicted, measured)) / (p_norm * m_norm)
    return min(float(corr), 1.0), (m_norm / p_norm) ** 2


def eta_d(d12sq_measured: float, d12sq_predicted: float) -> float:
    """Ratio of measured to predicted d12²"""
    if d12sq_predicted <= 0:
        raise ConfigValidationError(f"predicted d12sq must be positive, got {d12sq_predicted!r}")
    return d12sq_measured / d12sq_predicted


def measure_outgoing(
    pair: ScatteringPair,
    state: ProbeState,
    hypothesis: int,
    cfg: AcquisitionConfig,
    rng: Optional[np.random.Generator] = None,
) -> ComplexVector:
    """
    Averaged outgoing field of a shaped probe at n0 photons

    Shaped probes lose a fraction of their photons to the modulation, so the
    field actually sent is √(T_mod·n0)·ℰ; ``repeats`` frames are averaged.
    """
    _check(cfg)
    rng = rng or make_rng(cfg.seed)
    shaped = state.with_photons(cfg.modulation_efficiency * cfg.n0_per_column)
    shots = [measure(pair, shaped, hypothesis, cfg.sigma_sq, rng).z for _ in range(cfg.repeats)]
    frames = _jitter(np.column_stack(shots), cfg, rng)
    return frames.mean(axis=1)


def fidelity_report(
    pair: ScatteringPair, measured: ScatteringPair, state: ProbeState, cfg: AcquisitionConfig
) -> Dict[str, Any]:
    """
    Compare a probe's predicted and measured behaviour

    Predictions use the acquired matrices (what an experimenter knows);
    measurements use the true system. R1 estimates the modulation efficiency.
    eta_d compares the acquired d12² with the true one; eta_d_fields compares
    the d12² seen in the averaged probe fields (rescaled by R1) with the
    acquired prediction.
    """
    rng1, rng2 = substreams(cfg.seed, 2)
    root = math.sqrt(cfg.n0_per_column)
    report: Dict[str, Any] = {"state": state.label}
    fields = {}
    for hypothesis, rng in ((1, rng1), (2, rng2)):
        predicted = root * (measured.matrix(hypothesis) @ state.amplitudes)
        fields[hypothesis] = measure_outgoing(pair, state, hypothesis, cfg, rng)
        corr, ratio = fidelity_metrics(predicted, fields[hypothesis])
        report[f"corr_{hypothesis}"] = corr
        report[f"norm_ratio_{hypothesis}"] = ratio

    d12_true = quadratic_form(build_discrimination_operator(pair), state.amplitudes)
    d12_acquired = quadratic_form(build_discrimination_operator(measured), state.amplitudes)
    report["d12sq_true"] = d12_true
    report["d12sq_acquired"] = d12_acquired
    report["eta_d"] = eta_d(d12_acquired, d12_true) if d12_true > 0 else None
    t_mod = report["norm_ratio_1"]
    report["t_mod_estimate"] = t_mod
    if t_mod > 0 and d12_acquired > 0:
        seen = float(np.sum(np.abs(fields[2] - fields[1]) ** 2)) / (cfg.n0_per_column * t_mod)
        report["eta_d_fields"] = eta_d(seen, d12_acquired)
    else:
        report["eta_d_fields"] = None
    return report
