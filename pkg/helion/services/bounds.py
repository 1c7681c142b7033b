"""
Closed-form error probabilities for the binary decision

Helstrom bound, Gaussian (homodyne) receiver error with priors, binomial
confidence intervals and the photon-budget arithmetic.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import erfc, erfcinv, log_ndtr, logsumexp

from helion.core.config import settings
from helion.core.errors import ConfigValidationError, NumericError
from helion.schemas.config import PhotonBudget, Priors

logger = logging.getLogger(__name__)

SQRT_TOL = 1e-12


def _check_signal(n: float, d12sq: float) -> float:
    if n < 0:
        raise ConfigValidationError(f"photon number must be nonnegative, got {n!r}")
    if d12sq < 0 or d12sq > 4:
        raise ConfigValidationError(f"d12sq must lie in [0, 4], got {d12sq!r}")
    return n * d12sq


def helstrom_bound(n: float, d12sq: float, priors: Priors) -> float:
    """
    Minimum error over all measurements:
    P_H = ½(1 - sqrt(1 - 4·π1·π2·exp(-n·d12²)))
    """
    x = _check_signal(n, d12sq)
    q = 4.0 * priors.pi1 * priors.pi2 * math.exp(-x)
    # 1 - q without cancellation at tiny x
    arg = (priors.pi1 - priors.pi2) ** 2 - 4.0 * priors.pi1 * priors.pi2 * math.expm1(-x)
    if arg < -SQRT_TOL:
        raise NumericError(f"Helstrom bound square-root argument is negative ({arg:.3e})")
    # ½(1 - √(1-q)) rewritten as ½·q/(1 + √(1-q)) to avoid cancellation
    return 0.5 * q / (1.0 + math.sqrt(max(arg, 0.0)))


def _erfc_arguments(x: float, sigma_sq: float, log_ratio: float) -> Tuple[float, float]:
    base = math.sqrt(x / (8.0 * sigma_sq))
    offset = log_ratio * math.sqrt(sigma_sq / (2.0 * x))
    return base + offset, base - offset


def gaussian_receiver_error(
    n: float, d12sq: float, sigma_sq: Optional[float] = None, priors: Optional[Priors] = None
) -> float:
    """
    Error of the likelihood-ratio test on homodyne data

    P_G = (π1/2)·erfc[√(n·d12²/8σ²) + ln(π1/π2)·√(σ²/2n·d12²)]
        + (π2/2)·erfc[√(n·d12²/8σ²) - ln(π1/π2)·√(σ²/2n·d12²)]

    With no separation and unequal priors the receiver decides on the prior
    alone and the error is min(π1, π2); this case is logged.
    """
    sigma_sq = settings.SIGMA_SQ if sigma_sq is None else sigma_sq
    priors = priors or Priors()
    if sigma_sq <= 0:
        raise ConfigValidationError(f"sigma_sq must be positive, got {sigma_sq!r}")
    x = _check_signal(n, d12sq)
    if priors.pi1 == 0.0 or priors.pi2 == 0.0:
        return 0.0
    if priors.equal:
        return 0.5 * float(erfc(math.sqrt(x / (8.0 * sigma_sq))))
    if x == 0.0:
        logger.warning("Gaussian receiver with zero separation and unequal priors: deciding on priors")
        return min(priors.pi1, priors.pi2)
    first, second = _erfc_arguments(x, sigma_sq, priors.log_ratio)
    return 0.5 * priors.pi1 * float(erfc(first)) + 0.5 * priors.pi2 * float(erfc(second))


def _log_erfc(z: float) -> float:
    # erfc(z) = 2·Φ(-√2·z)
    return math.log(2.0) + float(log_ndtr(-math.sqrt(2.0) * z))


def log_gaussian_receiver_error(
    n: float, d12sq: float, sigma_sq: Optional[float] = None, priors: Optional[Priors] = None
) -> float:
    """ln P_G, finite far into the regime where P_G itself underflows"""
    sigma_sq = settings.SIGMA_SQ if sigma_sq is None else sigma_sq
    priors = priors or Priors()
    x = _check_signal(n, d12sq)
    if priors.pi1 == 0.0 or priors.pi2 == 0.0:
        return -math.inf
    if priors.equal:
        return math.log(0.5) + _log_erfc(math.sqrt(x / (8.0 * sigma_sq)))
    if x == 0.0:
        return math.log(min(priors.pi1, priors.pi2))
    first, second = _erfc_arguments(x, sigma_sq, priors.log_ratio)
    return float(
        logsumexp(
            [_log_erfc(first), _log_erfc(second)],
            b=[0.5 * priors.pi1, 0.5 * priors.pi2],
        )
    )


def theoretical_rate(
    n: float, d12sq_predicted: float, eta_d: float = 1.0, sigma_sq: Optional[float] = None
) -> float:
    """Equal-prior P_G with the predicted distance corrected by the measured η_d"""
    return gaussian_receiver_error(n, min(eta_d * d12sq_predicted, 4.0), sigma_sq, Priors())


def photons_for_error(target: float, d12sq: float, sigma_sq: Optional[float] = None) -> float:
    """Photon number at which the equal-prior P_G equals ``target``"""
    sigma_sq = settings.SIGMA_SQ if sigma_sq is None else sigma_sq
    if not 0.0 < target <= 0.5:
        raise ConfigValidationError(f"target error must lie in (0, 0.5], got {target!r}")
    if d12sq <= 0:
        raise ConfigValidationError("d12sq must be positive to reach a target error")
    return 8.0 * sigma_sq * float(erfcinv(2.0 * target)) ** 2 / d12sq


def binomial_ci(p: float, n_rep: int) -> Tuple[float, float]:
    """Two-standard-deviation (95.4%) normal interval for an error rate, clipped to [0, 1]"""
    if not 0.0 <= p <= 1.0:
        raise ConfigValidationError(f"rate must lie in [0, 1], got {p!r}")
    if n_rep < 1:
        raise ConfigValidationError(f"n_rep must be positive, got {n_rep!r}")
    half = 2.0 * math.sqrt(p * (1.0 - p) / n_rep)
    return max(0.0, p - half), min(1.0, p + half)


def effective_photons(budget: PhotonBudget) -> float:
    """n = n0 · T_nd · T_va · T_mod"""
    return budget.n0 * budget.t_nd * budget.t_va * budget.t_mod


def decay_constant(photons: Sequence[float], rates: Sequence[float]) -> float:
    """
    Slope through the origin of -ln(2·rate) against photon number

    Points with a rate of 0 (no information) or ≥ ½ (no decay) are skipped.
    """
    n = np.asarray(photons, dtype=float)
    r = np.asarray(rates, dtype=float)
    keep = (r > 0.0) & (r < 0.5)
    if not np.any(keep) or not np.any(n[keep] > 0):
        raise NumericError("no usable points to fit a decay constant")
    n, y = n[keep], -np.log(2.0 * r[keep])
    return float(np.dot(n, y) / np.dot(n, n))
