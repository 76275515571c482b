"""The two benchmark nonlinear plants and the noisy feedback sensor.

Both plants are second-order discrete maps driven by a saturating actuator
nonlinearity. Variant A is the nominal dynamics; variant B is the altered
dynamics used for the mid-episode disturbance test. The cube root is the real
odd root, so a (hypothetically) negative right-hand side stays a real signal.
"""

import enum
import math
from dataclasses import dataclass

from .errors import NumericalError
from .stochastics import Rng


class PlantVariant(enum.Enum):
    A = "a"
    B = "b"


@dataclass(frozen=True)
class PlantState:
    """Last two plant outputs plus the active dynamics variant."""

    y_curr: float = 0.0
    y_prev: float = 0.0
    variant: PlantVariant = PlantVariant.A


def _cbrt(x: float) -> float:
    # real odd cube root
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def plant_step(state: PlantState, u_bar: float) -> PlantState:
    """Advance the plant one step under input ``u_bar``; consumes no randomness."""
    y, y_prev = state.y_curr, state.y_prev
    try:
        # float exponentiation raises OverflowError past ~1e308 instead of
        # returning inf, so divergence is funneled through one error type
        if state.variant is PlantVariant.A:
            rhs = (y**4 / (5.0 + y_prev**6) + (7.0 * math.tanh(u_bar)) ** 8) / 2.0
        else:
            rhs = y**8 / (7.0 + y_prev**6) + (9.0 * math.tanh(u_bar)) ** 3
        y_next = _cbrt(rhs)
    except OverflowError as exc:
        raise NumericalError(f"plant output diverged under input {u_bar!r}") from exc
    if not math.isfinite(y_next):
        raise NumericalError(f"plant output diverged under input {u_bar!r}")
    return PlantState(y_next, y, state.variant)


def sense(y: float, rng: Rng, noise_std: float = 0.01) -> float:
    """Measured output: y plus zero-mean Gaussian sensor noise.

    Always consumes exactly one draw, even when noise_std is 0, so episode
    draw order does not depend on the noise setting.
    """
    return y + rng.normal(0.0, noise_std)
