"""
Discrimination operator, its spectrum and the probe states built from it
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from helion.core.errors import ConfigValidationError, ConsistencyError, DimensionError, NumericError
from helion.services.linalg import (
    ComplexMatrix,
    ComplexVector,
    RealVector,
    as_vector,
    eig_hermitian,
    quadratic_form,
)
from helion.services.scatter import ScatteringPair

logger = logging.getLogger(__name__)

EIGEN_WINDOW = 1e-9
CONSISTENCY_TOL = 1e-9
PHASE_TOL = 1e-7
DEGENERACY_TOL = 1e-6
UNDEFINED_MEAN = 1e-12


@dataclass(frozen=True)
class DiscriminationSpectrum:
    """Descending eigenvalues of D12 with orthonormal eigenstates as columns"""

    eigenvalues: RealVector
    eigenstates: ComplexMatrix
    mean_eigenvalue: float

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])


@dataclass(frozen=True)
class ProbeState:
    """Unit-norm incident field and the number of photons it carries"""

    amplitudes: ComplexVector
    photons: float
    label: str = ""

    def __post_init__(self):
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > 1e-10:
            raise ConfigValidationError(f"probe amplitudes must have unit norm, got {norm!r}")
        if not self.photons >= 0:
            raise ConfigValidationError(f"photon number must be nonnegative, got {self.photons!r}")

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    def with_photons(self, photons: float) -> "ProbeState":
        return ProbeState(amplitudes=self.amplitudes, photons=photons, label=self.label)


@dataclass(frozen=True)
class PhaseRecord:
    """Unitary-limit analysis of one eigenstate"""

    eigenvalue: float
    theta: float
    residual: float
    overlap: float
    degenerate: bool


def build_discrimination_operator(pair: ScatteringPair) -> ComplexMatrix:
    """D12 = (S2 - S1)†(S2 - S1), symmetrized"""
    if pair.s1.shape != pair.s2.shape:
        raise DimensionError(f"s1 {pair.s1.shape} and s2 {pair.s2.shape} differ in shape")
    delta = pair.s2 - pair.s1
    d12 = delta.conj().T @ delta
    return 0.5 * (d12 + d12.conj().T)


def spectrum(
    d12: ComplexMatrix, strict: bool = True, method: Optional[str] = None
) -> DiscriminationSpectrum:
    """
    Eigendecomposition of a discrimination operator

    Eigenvalues within 1e-9 of [0, 4] are clamped into it. Anything further
    out means the pair was broken and raises, unless ``strict`` is off (for
    operators estimated from noisy measurements), in which case it is clipped
    with a warning.
    """
    values, vectors = eig_hermitian(d12, method=method)
    lo, hi = float(values.min()), float(values.max())
    if lo < -EIGEN_WINDOW or hi > 4.0 + EIGEN_WINDOW:
        if strict:
            raise NumericError(f"D12 eigenvalues leave [0, 4]: min {lo:.3e}, max {hi:.12f}")
        logger.warning(f"Clipping measured D12 eigenvalues into [0, 4] (min {lo:.3e}, max {hi:.6f})")
    values = np.clip(values, 0.0, 4.0)
    mean = float(np.real(np.trace(d12))) / d12.shape[0]
    return DiscriminationSpectrum(eigenvalues=values, eigenstates=vectors, mean_eigenvalue=mean)


def optimal_state(spec: DiscriminationSpectrum, photons: float) -> ProbeState:
    """Leading eigenstate: maximizes d12² over all unit incident states"""
    return ProbeState(amplitudes=spec.eigenstates[:, 0].copy(), photons=photons, label="optimal")


def eigenstate(spec: DiscriminationSpectrum, j: int, photons: float) -> ProbeState:
    """The j-th eigenstate by descending eigenvalue, j = 1 being the optimal state"""
    if not 1 <= j <= spec.dim:
        raise ConfigValidationError(f"eigenstate index must lie in [1, {spec.dim}], got {j}")
    return ProbeState(amplitudes=spec.eigenstates[:, j - 1].copy(), photons=photons, label=f"eigen:{j}")


def average_state(spec: DiscriminationSpectrum, photons: float) -> ProbeState:
    """Equal-weight superposition of all eigenstates; its d12² is the mean eigenvalue"""
    amplitudes = spec.eigenstates.sum(axis=1) / math.sqrt(spec.dim)
    return ProbeState(amplitudes=amplitudes, photons=photons, label="average")


def enhancement(spec: DiscriminationSpectrum) -> Optional[float]:
    """Λ1/Λ̄, or None when the operator is (numerically) zero"""
    if spec.mean_eigenvalue <= UNDEFINED_MEAN:
        return None
    return float(spec.eigenvalues[0] / spec.mean_eigenvalue)


def significant_modes(spec: DiscriminationSpectrum, floor: float = 1e-9) -> int:
    return int(np.count_nonzero(spec.eigenvalues > floor))


def statistical_distance(
    pair: ScatteringPair, state, d12: Optional[ComplexMatrix] = None
) -> float:
    """
    Per-photon statistical distance d12² of a unit incident state

    Evaluated as the summed squared difference of the two outgoing fields and
    as the quadratic form of D12; the two must agree.
    """
    x = as_vector(getattr(state, "amplitudes", state), "state")
    if x.shape[0] != pair.m_in:
        raise DimensionError(f"state has dimension {x.shape[0]}, system expects {pair.m_in}")
    by_modes = float(np.sum(np.abs(pair.s2 @ x - pair.s1 @ x) ** 2))
    if d12 is None:
        d12 = build_discrimination_operator(pair)
    by_operator = quadratic_form(d12, x)
    scale = max(abs(by_modes), abs(by_operator))
    if abs(by_modes - by_operator) > CONSISTENCY_TOL * scale + 1e-15:
        raise ConsistencyError(
            f"d12² mismatch: mode sum {by_modes!r} vs operator form {by_operator!r}"
        )
    return max(by_operator, 0.0)


def unitary_phase_analysis(
    pair: ScatteringPair, spec: DiscriminationSpectrum
) -> List[PhaseRecord]:
    """
    Output phase shift θ of every eigenstate in the lossless limit

    For unitary S-matrices each eigenstate leaves both systems with the same
    field up to a phase, S2 v = e^{iθ} S1 v, and Λ = 2(1 - cos θ). Eigenstates
    mixed inside a degenerate eigenspace (|⟨S1 v|S2 v⟩| < 1) are flagged
    rather than treated as failures.
    """
    if not pair.unitary:
        raise ConfigValidationError("unitary phase analysis needs a unitary pair")
    records: List[PhaseRecord] = []
    u_all = pair.s1 @ spec.eigenstates
    w_all = pair.s2 @ spec.eigenstates
    for j in range(spec.dim):
        u, w = u_all[:, j], w_all[:, j]
        overlap = np.vdot(u, w)
        theta = float(np.angle(overlap))
        residual = float(np.linalg.norm(w - np.exp(1j * theta) * u))
        value = float(spec.eigenvalues[j])
        degenerate = abs(overlap) < 1.0 - DEGENERACY_TOL
        mismatch = abs(value - 2.0 * (1.0 - math.cos(theta)))
        if not degenerate and (mismatch > PHASE_TOL or residual > PHASE_TOL):
            raise ConsistencyError(
                f"eigenstate {j + 1}: Λ={value:.12f} vs 2(1-cosθ) off by {mismatch:.3e}, "
                f"residual {residual:.3e}"
            )
        records.append(
            PhaseRecord(
                eigenvalue=value,
                theta=theta,
                residual=residual,
                overlap=float(abs(overlap)),
                degenerate=degenerate,
            )
        )
    flagged = sum(r.degenerate for r in records)
    if flagged:
        logger.warning(f"{flagged} eigenstate(s) mix a degenerate eigenspace; identity not enforced")
    return records
