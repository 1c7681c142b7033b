"""
Synthetic scattering systems

Two random propagators sandwich a diagonal target mask: a (plane x input)
carries light from the incident modes to the target plane, b (output x plane)
carries it on to the detected modes. S1 uses an all-ones mask, S2 changes the
mask on the target pixels.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from helion.core.errors import ConfigValidationError, DimensionError
from helion.core.rng import GENERATOR_ID, SeedLike, make_rng, substreams
from helion.schemas.config import LossModel, SystemConfig
from helion.services.linalg import (
    ComplexMatrix,
    ComplexVector,
    as_matrix,
    as_vector,
    largest_singular_value,
)

logger = logging.getLogger(__name__)

SUBUNITARY_SIGMA = 0.95
UNITARY_TOL = 1e-9
PHYSICAL_TOL = 1e-9


@dataclass(frozen=True)
class ScatteringPair:
    """S-matrices without (s1) and with (s2) the target, plus provenance"""

    s1: ComplexMatrix
    s2: ComplexMatrix
    sigma_max: float
    unitary: bool
    a: Optional[ComplexMatrix] = None
    b: Optional[ComplexMatrix] = None
    mask1: Optional[ComplexVector] = None
    mask2: Optional[ComplexVector] = None
    config: Optional[SystemConfig] = None
    generator: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def m_in(self) -> int:
        return self.s1.shape[1]

    @property
    def n_out(self) -> int:
        return self.s1.shape[0]

    def matrix(self, hypothesis: int) -> ComplexMatrix:
        if hypothesis == 1:
            return self.s1
        if hypothesis == 2:
            return self.s2
        raise ConfigValidationError(f"hypothesis must be 1 or 2, got {hypothesis}")

    @classmethod
    def from_matrices(cls, s1, s2, **kwargs) -> "ScatteringPair":
        """Wrap externally supplied matrices, deriving sigma_max and the unitary flag"""
        s1 = as_matrix(s1, "s1")
        s2 = as_matrix(s2, "s2")
        if s1.shape != s2.shape:
            raise DimensionError(f"s1 {s1.shape} and s2 {s2.shape} differ in shape")
        sigma = max(largest_singular_value(s1), largest_singular_value(s2))
        return cls(
            s1=s1,
            s2=s2,
            sigma_max=sigma,
            unitary=is_unitary(s1) and is_unitary(s2),
            **kwargs,
        )


def is_unitary(u: ComplexMatrix, tol: float = UNITARY_TOL) -> bool:
    if u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else make_rng(seed)


def gen_ginibre(rows: int, cols: int, seed: SeedLike) -> ComplexMatrix:
    """i.i.d. circular complex Gaussian entries, variance 1/2 per quadrature"""
    if rows < 1 or cols < 1:
        raise ConfigValidationError(f"Ginibre shape must be positive, got ({rows}, {cols})")
    rng = _rng(seed)
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / math.sqrt(2.0)


def gen_random_unitary(dim: int, seed: SeedLike) -> ComplexMatrix:
    """Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal phases removed"""
    if dim < 1:
        raise ConfigValidationError(f"unitary dimension must be positive, got {dim}")
    q, r = np.linalg.qr(gen_ginibre(dim, dim, seed))
    d = np.diagonal(r)
    return q * (d / np.abs(d))[np.newaxis, :]


def build_masks(config: SystemConfig) -> Tuple[ComplexVector, ComplexVector]:
    """Target-plane masks for both hypotheses"""
    mask1 = np.ones(config.n_plane, dtype=np.complex128)
    mask2 = mask1.copy()
    if config.target_pixels:
        value = config.target_transmittance * np.exp(1j * config.target_phase)
        mask2[np.asarray(config.target_pixels, dtype=np.intp)] = value
    return mask1, mask2


def gen_system(config: SystemConfig) -> ScatteringPair:
    """
    Draw a diffuser-target-diffuser system

    unitary_embed draws both propagators from the Haar measure;
    ginibre_subunitary draws Ginibre propagators and rescales the output
    propagator so the larger of sigma_max(s1), sigma_max(s2) is 0.95.
    Sub-streams: [input propagator a, output propagator b].
    """
    mask1, mask2 = build_masks(config)
    rng_a, rng_b = substreams(config.seed, 2)

    if config.loss_model == LossModel.UNITARY_EMBED:
        a = gen_random_unitary(config.n_plane, rng_a)
        b = gen_random_unitary(config.n_plane, rng_b)
    else:
        a = gen_ginibre(config.n_plane, config.m_in, rng_a)
        b = gen_ginibre(config.n_out, config.n_plane, rng_b)
        raw = max(
            largest_singular_value((b * mask1) @ a),
            largest_singular_value((b * mask2) @ a),
        )
        if raw > 0:
            b = b * (SUBUNITARY_SIGMA / raw)

    s1 = (b * mask1[np.newaxis, :]) @ a
    s2 = (b * mask2[np.newaxis, :]) @ a
    sigma = max(largest_singular_value(s1), largest_singular_value(s2))
    if sigma > 1.0 + PHYSICAL_TOL:
        raise ConfigValidationError(f"generated pair is unphysical (sigma_max = {sigma:.12f})")

    unitary = config.loss_model == LossModel.UNITARY_EMBED and is_unitary(s1) and is_unitary(s2)
    logger.info(
        f"Generated {config.loss_model.value} system: S {s1.shape}, "
        f"{len(config.target_pixels)} target pixel(s), sigma_max={sigma:.6f}, unitary={unitary}"
    )
    return ScatteringPair(
        s1=s1,
        s2=s2,
        sigma_max=sigma,
        unitary=unitary,
        a=a,
        b=b,
        mask1=mask1,
        mask2=mask2,
        config=config,
        generator=GENERATOR_ID,
    )


def _amplitudes(state) -> ComplexVector:
    return as_vector(getattr(state, "amplitudes", state), "state")


def target_plane_field(pair: ScatteringPair, state, hypothesis: int) -> ComplexVector:
    """Field just after the target plane: diag(mask_hyp) · a · state"""
    if pair.a is None or pair.mask1 is None or pair.mask2 is None:
        raise ConfigValidationError("pair carries no propagator/mask model (not synthesized)")
    x = _amplitudes(state)
    if x.shape[0] != pair.a.shape[1]:
        raise DimensionError(f"state has dimension {x.shape[0]}, system expects {pair.a.shape[1]}")
    if hypothesis not in (1, 2):
        raise ConfigValidationError(f"hypothesis must be 1 or 2, got {hypothesis}")
    mask = pair.mask1 if hypothesis == 1 else pair.mask2
    return mask * (pair.a @ x)


def target_intensity_fraction(
    pair: ScatteringPair,
    state,
    hypothesis: int = 1,
    pixels: Optional[Sequence[int]] = None,
) -> float:
    """Share of the target-plane intensity that falls on the target pixels"""
    if pixels is None:
        if pair.config is None:
            raise ConfigValidationError("no target pixels given and pair has no config")
        pixels = pair.config.target_pixels
    intensity = np.abs(target_plane_field(pair, state, hypothesis)) ** 2
    total = float(np.sum(intensity))
    if total == 0.0:
        return 0.0
    return float(np.sum(intensity[np.asarray(list(pixels), dtype=np.intp)]) / total)


def target_mode_count(area: float, numerical_aperture: float, wavelength: float) -> float:
    """Number of optical modes covering a target of the given area: 2π·A·NA²/λ²"""
    if area < 0 or numerical_aperture < 0 or wavelength <= 0:
        raise ConfigValidationError("area and NA must be nonnegative, wavelength positive")
    return 2.0 * math.pi * area * numerical_aperture**2 / wavelength**2
