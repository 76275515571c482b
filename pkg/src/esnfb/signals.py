"""Reference-signal generators.

Two families are provided: a step and a two-tone sinusoid ("complex" signal).
Both support point lookup at any non-negative step and the forward-looking
window that feeds the control-side reservoir. Lookups past the configured
horizon hold the terminal value so the future window stays defined at episode
end.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class StepSignal:
    """0 before ``rise_step``, ``amplitude`` from it onward."""

    rise_step: int = 10
    amplitude: float = 1.0
    horizon: int = 2000


@dataclass(frozen=True)
class ComplexSignal:
    """Offset plus two sinusoids: offset + amp1*sin(2*pi*k/period1)
    + amp2*sin(2*pi*k/period2 + phase2).

    Defaults keep the signal within the smoothly reachable band of the
    benchmark plant (minimum value above 0.1), which construction enforces.
    """

    offset: float = 2.0
    amp1: float = 1.2
    period1: float = 1000.0
    amp2: float = 0.6
    period2: float = 333.0
    phase2: float = math.pi / 4
    horizon: int = 6000

    def __post_init__(self):
        if self.offset - abs(self.amp1) - abs(self.amp2) <= 0.1:
            raise InvalidParameterError(
                "complex signal may dip to "
                f"{self.offset - abs(self.amp1) - abs(self.amp2):g}; "
                "minimum must stay above 0.1"
            )


ReferenceSignal = StepSignal | ComplexSignal


def reference_at(sig: ReferenceSignal, k: int) -> float:
    """Signal value at step ``k`` (k past the horizon holds the terminal value)."""
    k = min(k, sig.horizon)
    if isinstance(sig, StepSignal):
        return sig.amplitude if k >= sig.rise_step else 0.0
    return (
        sig.offset
        + sig.amp1 * math.sin(2.0 * math.pi * k / sig.period1)
        + sig.amp2 * math.sin(2.0 * math.pi * k / sig.period2 + sig.phase2)
    )


def future_window(sig: ReferenceSignal, k: int, delta: int) -> np.ndarray:
    """The ascending window [ref(k+1), ..., ref(k+delta)]."""
    if delta < 1:
        raise InvalidParameterError(f"window length must be >= 1, got {delta}")
    return np.array([reference_at(sig, k + 1 + i) for i in range(delta)])


def reference_series(sig: ReferenceSignal, n: int) -> np.ndarray:
    """Values at steps 0..n-1; lets episode loops avoid per-step lookups."""
    return np.array([reference_at(sig, k) for k in range(n)])
