"""
Dense complex linear algebra kernel

Products, adjoints, Hermitian eigendecomposition and largest singular value
on numpy complex128 arrays. Scattering matrices, the discrimination operator
and field ensembles all travel through here.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from helion.core.config import settings
from helion.core.errors import ConfigValidationError, ConvergenceError, DimensionError, NumericError

logger = logging.getLogger(__name__)

ComplexMatrix = NDArray[np.complex128]
ComplexVector = NDArray[np.complex128]
RealVector = NDArray[np.float64]

HERMITIAN_TOL = 1e-10
RESIDUAL_TOL = 1e-8
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-12
POWER_TOL = 1e-10
POWER_MAX_ITER = 10000


def as_matrix(a, name: str = "matrix") -> ComplexMatrix:
    """Coerce to a finite 2-D complex128 array"""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigValidationError(f"{name} contains NaN or Inf entries")
    return arr


def as_vector(x, name: str = "vector") -> ComplexVector:
    """Coerce to a finite 1-D complex128 array"""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty 1-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigValidationError(f"{name} contains NaN or Inf entries")
    return arr


def matmul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Complex matrix product a·b"""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose"""
    return np.ascontiguousarray(as_matrix(a).conj().T)


def frobenius_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a))


def hermitian_defect(h: ComplexMatrix) -> float:
    """Largest entry of |h - h†|"""
    return float(np.max(np.abs(h - h.conj().T)))


def quadratic_form(h: ComplexMatrix, x: ComplexVector) -> float:
    """Re⟨x|h|x⟩"""
    return float(np.real(np.vdot(x, h @ x)))


def fix_phase(vectors: ComplexMatrix) -> ComplexMatrix:
    """Rotate each column so that its largest-magnitude entry is real positive"""
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    mags = np.abs(pivots)
    phases = np.where(mags > 0, np.conj(pivots) / np.where(mags > 0, mags, 1.0), 1.0)
    return vectors * phases[np.newaxis, :]


def _jacobi(h: ComplexMatrix, scale: float) -> Tuple[RealVector, ComplexMatrix]:
    """Cyclic Jacobi rotations for a Hermitian matrix"""
    a = h.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = JACOBI_TOL * scale
    off = 0.0
    for _ in range(JACOBI_MAX_SWEEPS):
        off = float(np.sqrt(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2)))
        if off <= target:
            return np.real(np.diag(a)).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # phase removal on q, then a real rotation in the (p, q) plane
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g
                a[cols, :] = g.conj().T @ a[cols, :]
                v[:, cols] = v[:, cols] @ g
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    raise ConvergenceError(
        f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps", residual=off
    )


def eig_hermitian(
    h: ComplexMatrix, method: Optional[str] = None
) -> Tuple[RealVector, ComplexMatrix]:
    """
    Eigendecomposition of a Hermitian matrix

    Returns eigenvalues in descending order and the matching orthonormal
    eigenvectors as columns, each column phased so its largest entry is
    real positive. ``method`` is "lapack" (numpy.linalg.eigh) or "jacobi"
    (cyclic rotations); defaults to ``settings.EIGEN_METHOD``.
    """
    h = as_matrix(h, "h")
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"eigendecomposition needs a square matrix, got {h.shape}")
    scale = max(1.0, frobenius_norm(h))
    defect = hermitian_defect(h)
    if defect > HERMITIAN_TOL:
        raise ConfigValidationError(f"matrix is not Hermitian (max |h - h†| = {defect:.3e})")
    h = 0.5 * (h + h.conj().T)

    method = method or settings.EIGEN_METHOD
    if method == "lapack":
        try:
            values, vectors = np.linalg.eigh(h)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"LAPACK eigendecomposition failed: {exc}") from exc
    elif method == "jacobi":
        values, vectors = _jacobi(h, scale)
    else:
        raise ConfigValidationError(f"unknown eigensolver method: {method}")

    order = np.argsort(values, kind="stable")[::-1]
    values = np.asarray(values[order], dtype=np.float64)
    vectors = fix_phase(np.asarray(vectors[:, order], dtype=np.complex128))

    residual = float(np.max(np.linalg.norm(h @ vectors - vectors * values, axis=0)))
    if residual > RESIDUAL_TOL * scale:
        raise ConvergenceError(f"{method} eigendecomposition inaccurate", residual=residual)
    return values, vectors


def largest_singular_value(a: ComplexMatrix) -> float:
    """
    σ_max(a) by power iteration on a†a, started from the normalized all-ones vector

    Iteration stops once the residual ‖a†a·x - λx‖ falls below POWER_TOL·λ,
    which bounds the error in λ by the same amount.
    """
    a = as_matrix(a, "a")
    x = np.full(a.shape[1], 1.0 / np.sqrt(a.shape[1]), dtype=np.complex128)
    for _ in range(POWER_MAX_ITER):
        y = a.conj().T @ (a @ x)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            # start vector in the null space; zero matrices land here too
            if not np.any(a):
                return 0.0
            break
        lam = float(np.real(np.vdot(x, y)))
        residual = float(np.linalg.norm(y - lam * x))
        if residual <= POWER_TOL * max(lam, 1e-300):
            return float(np.sqrt(max(lam, 0.0)))
        x = y / norm
    logger.warning("Power iteration did not settle; falling back to SVD for sigma_max")
    try:
        return float(np.linalg.norm(a, 2))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD of a {a.shape} matrix failed: {exc}") from exc
