"""Dense matrix/vector helpers for building and scaling reservoirs.

Matrices are plain float64 ``np.ndarray`` values. The eigenvalue work is
delegated to LAPACK through ``np.linalg.eigvals`` (Hessenberg reduction plus
shifted QR), which handles the complex-conjugate eigenvalue pairs that random
zero-mean reservoirs routinely have and where plain real power iteration
stalls.
"""

import numpy as np

from .errors import DegenerateMatrixError, InvalidParameterError, NumericalError, ShapeError


def matvec(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product with an explicit shape check."""
    m = np.asarray(m)
    v = np.asarray(v)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got ndim={m.ndim}")
    if v.ndim != 1 or m.shape[1] != v.shape[0]:
        raise ShapeError(f"cannot multiply {m.shape} by vector of length {v.shape}")
    return m @ v


def spectral_radius(m: np.ndarray) -> float:
    """Largest eigenvalue modulus of a square real matrix."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"spectral radius needs a square matrix, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("matrix has non-finite entries")
    try:
        eigs = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc
    return float(np.max(np.abs(eigs))) if m.size else 0.0


def scale_to_spectral_radius(m: np.ndarray, target: float) -> np.ndarray:
    """Rescale ``m`` so its spectral radius equals ``target``."""
    if target <= 0:
        raise InvalidParameterError(f"target spectral radius must be > 0, got {target}")
    rho = spectral_radius(m)
    if rho == 0.0:
        raise DegenerateMatrixError("matrix has zero spectral radius; cannot rescale")
    return np.asarray(m, dtype=float) * (target / rho)
