"""Recursive least squares adaptation of the shared readout.

Given a regressor x (the learning-side reservoir state) and a scalar target
(the delayed saturated plant input), one update computes, in this order:

    e     = w . x - target                      a-priori identification error
    P_new = P/lam - (P x x^T P) / (lam * (lam + x^T P x))
    w_new = w - e * (P_new x)

P is a running estimate of the regularized inverse correlation matrix,
initialized to I/alpha. The P recursion must run before the weight correction
because the correction uses the updated P. After each update P is re-
symmetrized, (P + P^T)/2, to suppress floating-point drift over long runs.

The update never consumes randomness.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidParameterError, NumericalError


@dataclass
class RlsState:
    """Inverse-correlation estimate plus the two scalar hyperparameters.

    ``lam`` (the forgetting factor) is normally just below 1; exactly 1 turns
    forgetting off, which test oracles rely on.
    """

    p: np.ndarray
    alpha: float
    lam: float


@dataclass
class RlsUpdateResult:
    e_esn: float
    w_out: np.ndarray
    p: np.ndarray


def rls_init(alpha: float, r: int, lam: float = 1.0) -> RlsState:
    """Fresh state with P = I/alpha."""
    if alpha <= 0:
        raise InvalidParameterError(f"learning rate must be > 0, got {alpha}")
    if not 0.0 < lam <= 1.0:
        raise InvalidParameterError(f"forgetting factor must lie in (0, 1], got {lam}")
    return RlsState(np.eye(r) / alpha, alpha, lam)


def rls_update(state: RlsState, w_out: np.ndarray, x_l: np.ndarray, target: float) -> RlsUpdateResult:
    """One recursive update toward ``w . x_l == target``.

    ``state.p`` is replaced in place with the new matrix; the returned readout
    is a fresh array (the caller shares it with the control-side reservoir).
    """
    lam = state.lam
    e = float(w_out @ x_l) - target
    px = linalg.matvec(state.p, x_l)
    s = float(x_l @ px)
    p_new = state.p / lam
    p_new -= np.outer(px, px) / (lam * (lam + s))
    p_new = p_new + p_new.T
    p_new *= 0.5
    w_new = w_out - e * linalg.matvec(p_new, x_l)
    if not (np.isfinite(e) and np.isfinite(w_new).all() and np.isfinite(p_new).all()):
        raise NumericalError("recursive least squares update overflowed")
    state.p = p_new
    return RlsUpdateResult(e, w_new, p_new)
