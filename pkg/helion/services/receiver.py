"""
Virtual homodyne experiment

Noisy field samples under either hypothesis, log-likelihood-ratio decisions
and the observed rate of error.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from helion.core.errors import ConfigValidationError, DimensionError
from helion.core.rng import GENERATOR_ID, make_rng
from helion.schemas.config import MeanStrategy, Priors
from helion.services.bounds import binomial_ci, gaussian_receiver_error
from helion.services.discrim import ProbeState
from helion.services.linalg import ComplexVector, RealVector
from helion.services.scatter import ScatteringPair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomodyneSample:
    """One measured outgoing field and the hypothesis that produced it"""

    z: ComplexVector
    truth: int


@dataclass(frozen=True)
class TrialBatch:
    """Record of a Monte Carlo detection run"""

    n_rep: int
    decisions: np.ndarray
    truths: np.ndarray
    llr: RealVector
    error_rate: float
    ci: Tuple[float, float]
    seed: int
    mean_strategy: MeanStrategy
    photons: float
    d12sq: float
    predicted_error: float
    noise_variance: float
    detected_photons: Tuple[float, float]
    extra: Dict[str, Any] = field(default_factory=dict)

    def samples(self) -> pd.DataFrame:
        """Per-trial table: trial, truth, llr, decision"""
        return pd.DataFrame(
            {
                "trial": np.arange(self.n_rep),
                "truth": self.truths,
                "llr": self.llr,
                "decision": self.decisions,
            }
        )

    def summary(self) -> Dict[str, Any]:
        detected = float(np.mean(self.detected_photons))
        return {
            "n_rep": self.n_rep,
            "error_rate": self.error_rate,
            "ci": list(self.ci),
            "predicted_error": self.predicted_error,
            "photons": self.photons,
            "d12sq": self.d12sq,
            "mean_strategy": self.mean_strategy.value,
            "seed": self.seed,
            "noise_variance": self.noise_variance,
            "detected_photons": list(self.detected_photons),
            "incident_per_detected": (self.photons / detected) if detected > 0 else None,
            "generator": GENERATOR_ID,
            **self.extra,
        }


def sample_homodyne(expected, sigma_sq: float, rng: np.random.Generator) -> np.ndarray:
    """Add independent Normal(0, σ²) noise to both quadratures of every mode"""
    if sigma_sq <= 0:
        raise ConfigValidationError(f"sigma_sq must be positive, got {sigma_sq!r}")
    expected = np.asarray(expected, dtype=np.complex128)
    sigma = math.sqrt(sigma_sq)
    re = rng.standard_normal(expected.shape)
    im = rng.standard_normal(expected.shape)
    return expected + sigma * (re + 1j * im)


def measure(
    pair: ScatteringPair, state: ProbeState, truth: int, sigma_sq: float, rng: np.random.Generator
) -> HomodyneSample:
    """One homodyne shot of the outgoing field under hypothesis ``truth``"""
    if state.dim != pair.m_in:
        raise DimensionError(f"state has dimension {state.dim}, system expects {pair.m_in}")
    expected = math.sqrt(state.photons) * (pair.matrix(truth) @ state.amplitudes)
    return HomodyneSample(z=sample_homodyne(expected, sigma_sq, rng), truth=truth)


def log_likelihood_ratio(z, e1, e2, sigma_sq: float):
    """
    ln l(Z) = Re[Σ conj(e2 - e1)·z]/σ² + Σ(|e1|² - |e2|²)/(2σ²)

    ``z`` may hold one sample or a batch in its rows; ``e1``/``e2`` may be
    shared vectors or one row per sample. Sums run over the last axis.
    """
    z = np.asarray(z, dtype=np.complex128)
    e1 = np.asarray(e1, dtype=np.complex128)
    e2 = np.asarray(e2, dtype=np.complex128)
    if e1.shape != e2.shape or z.shape[-1] != e1.shape[-1]:
        raise DimensionError(f"dimension mismatch: z {z.shape}, e1 {e1.shape}, e2 {e2.shape}")
    delta = e2 - e1
    linear = np.real(np.sum(np.conj(delta) * z, axis=-1)) / sigma_sq
    offset = np.sum(np.abs(e1) ** 2 - np.abs(e2) ** 2, axis=-1) / (2.0 * sigma_sq)
    result = linear + offset
    return float(result) if np.ndim(result) == 0 else result


def _threshold(priors: Priors) -> float:
    try:
        return priors.log_ratio
    except ValueError as exc:
        raise ConfigValidationError(str(exc)) from exc


def decide(llr: float, priors: Priors) -> int:
    """Choose H2 when ln l exceeds ln(π1/π2), otherwise H1 (ties go to H1)"""
    return 2 if llr > _threshold(priors) else 1


def decide_all(llr: np.ndarray, priors: Priors) -> np.ndarray:
    return np.where(np.asarray(llr) > _threshold(priors), 2, 1).astype(np.int8)


def draw_truths(
    priors: Priors, n_rep: int, rng: np.random.Generator, fixed_split: bool = False
) -> np.ndarray:
    """i.i.d. labels from the priors, or an exact round(π2·n_rep) split in shuffled order"""
    if fixed_split:
        n2 = int(round(priors.pi2 * n_rep))
        labels = np.concatenate([np.ones(n_rep - n2), np.full(n2, 2)]).astype(np.int8)
        return rng.permutation(labels)
    return np.where(rng.random(n_rep) < priors.pi2, 2, 1).astype(np.int8)


def expected_detected_photons(pair: ScatteringPair, state: ProbeState, hypothesis: int) -> float:
    """Mean number of photons reaching the detected modes: n·‖S_i ℰ‖²"""
    return state.photons * float(np.sum(np.abs(pair.matrix(hypothesis) @ state.amplitudes) ** 2))


def quadrature_variance(samples: np.ndarray, means: np.ndarray) -> Tuple[float, float, float]:
    """Residual variance of the real and imaginary quadratures, and their pooled value"""
    residual = np.asarray(samples) - np.asarray(means)
    var_re = float(np.mean(residual.real**2))
    var_im = float(np.mean(residual.imag**2))
    return var_re, var_im, 0.5 * (var_re + var_im)


def _means(
    strategy: MeanStrategy,
    z: np.ndarray,
    f1: np.ndarray,
    f2: np.ndarray,
    priors: Priors,
    leave_one_out: bool,
    reference: Optional[ScatteringPair],
    scaled: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    if strategy == MeanStrategy.ORACLE_MEANS:
        return f1, f2
    if strategy == MeanStrategy.REFERENCE_MEANS:
        if reference is None:
            raise ConfigValidationError("reference_means needs a reference pair")
        if reference.s1.shape != (f1.shape[0], scaled.shape[0]):
            raise DimensionError("reference pair shape does not match the system")
        return reference.s1 @ scaled, reference.s2 @ scaled
    # empirical_sum_mean: E_s from the low-light data, E_d from the bright matrices
    _threshold(priors)  # divides by both priors below
    n_rep = z.shape[0]
    if leave_one_out:
        if n_rep < 2:
            raise ConfigValidationError("leave-one-out needs at least two trials")
        e_s = (z.sum(axis=0)[np.newaxis, :] - z) / (n_rep - 1)
    else:
        e_s = z.mean(axis=0)
    e_d = priors.pi2 * f2 - priors.pi1 * f1
    return (e_s - e_d) / (2.0 * priors.pi1), (e_s + e_d) / (2.0 * priors.pi2)


def run_trials(
    pair: ScatteringPair,
    state: ProbeState,
    priors: Priors,
    sigma_sq: float,
    n_rep: int,
    mean_strategy: MeanStrategy = MeanStrategy.ORACLE_MEANS,
    seed: int = 0,
    leave_one_out: bool = False,
    fixed_split: bool = False,
    reference: Optional[ScatteringPair] = None,
) -> TrialBatch:
    """
    Simulate n_rep homodyne measurements and decide each one

    One generator seeded from ``seed`` draws, in order, the truth labels and
    then all noise samples as an (n_rep, N) block.
    """
    if n_rep < 1:
        raise ConfigValidationError(f"n_rep must be positive, got {n_rep}")
    if state.dim != pair.m_in:
        raise DimensionError(f"state has dimension {state.dim}, system expects {pair.m_in}")
    mean_strategy = MeanStrategy(mean_strategy)
    rng = make_rng(seed)

    truths = draw_truths(priors, n_rep, rng, fixed_split)
    scaled = math.sqrt(state.photons) * state.amplitudes
    f1 = pair.s1 @ scaled
    f2 = pair.s2 @ scaled
    expected = np.where((truths == 2)[:, np.newaxis], f2[np.newaxis, :], f1[np.newaxis, :])
    z = sample_homodyne(expected, sigma_sq, rng)

    e1, e2 = _means(mean_strategy, z, f1, f2, priors, leave_one_out, reference, scaled)
    llr = log_likelihood_ratio(z, e1, e2, sigma_sq)
    decisions = decide_all(llr, priors)
    errors = int(np.count_nonzero(decisions != truths))
    error_rate = errors / n_rep

    d12sq = min(float(np.sum(np.abs((pair.s2 - pair.s1) @ state.amplitudes) ** 2)), 4.0)
    predicted = gaussian_receiver_error(state.photons, d12sq, sigma_sq, priors)
    _, _, pooled = quadrature_variance(z, expected)
    batch = TrialBatch(
        n_rep=n_rep,
        decisions=decisions,
        truths=truths,
        llr=np.asarray(llr, dtype=np.float64),
        error_rate=error_rate,
        ci=binomial_ci(error_rate, n_rep),
        seed=seed,
        mean_strategy=mean_strategy,
        photons=state.photons,
        d12sq=d12sq,
        predicted_error=predicted,
        noise_variance=pooled,
        detected_photons=(
            expected_detected_photons(pair, state, 1),
            expected_detected_photons(pair, state, 2),
        ),
        extra={"state": state.label, "leave_one_out": leave_one_out, "fixed_split": fixed_split},
    )
    logger.info(
        f"{n_rep} trials ({state.label or 'state'}, n={state.photons:.4g}, {mean_strategy.value}): "
        f"error rate {error_rate:.4f} vs predicted {predicted:.4f}"
    )
    return batch
