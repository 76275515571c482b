"""Scalar summaries of traces and cross-seed aggregation.

Aggregation uses the population standard deviation (ddof=0): the shaded
regions drawn from these series are mean +/- std over the whole set of runs,
not an estimator of a wider population.
"""

from dataclasses import dataclass

import numpy as np

from .closed_loop import RunTrace
from .errors import InvalidParameterError, ShapeError

# below the default tolerance lies well above the 0.01 sensor-noise floor;
# the default hold spans several periods of the reference signals' structure
DEFAULT_TOL = 0.1
DEFAULT_HOLD = 200


@dataclass
class AggregateSeries:
    """Per-step mean and population std of every trace channel across seeds."""

    n_seeds: int
    mean: dict[str, np.ndarray]
    std: dict[str, np.ndarray]

    @property
    def horizon(self) -> int:
        return len(self.mean["y"])


def window_rmse(trace: RunTrace, start: int, stop: int) -> float:
    """Root-mean-square tracking error over steps [start, stop)."""
    if not 0 <= start < stop <= trace.horizon:
        raise InvalidParameterError(
            f"window [{start}, {stop}) invalid for horizon {trace.horizon}"
        )
    err = trace.e_tilde[start:stop]
    return float(np.sqrt(np.mean(err * err)))


def overshoot(trace: RunTrace) -> float:
    """Largest amount the true output exceeds its reference, clamped at 0."""
    return float(max(0.0, np.max(trace.y - trace.y_d)))


def convergence_step(
    trace: RunTrace,
    tol: float = DEFAULT_TOL,
    hold: int = DEFAULT_HOLD,
    start: int = 0,
) -> int | None:
    """Smallest k >= start with |error| < tol for ``hold`` consecutive steps.

    Returns None when no window of that length qualifies before the horizon.
    """
    if tol <= 0:
        raise InvalidParameterError(f"tolerance must be > 0, got {tol}")
    if hold < 1:
        raise InvalidParameterError(f"hold must be >= 1, got {hold}")
    above = (np.abs(trace.e_tilde[start:]) >= tol).astype(np.int64)
    if len(above) < hold:
        return None
    # window [k, k+hold) qualifies iff it contains no above-tolerance step
    counts = np.cumsum(above)
    in_window = counts[hold - 1 :].copy()
    in_window[1:] -= counts[: len(counts) - hold]
    hits = np.nonzero(in_window == 0)[0]
    return start + int(hits[0]) if len(hits) else None


def aggregate(traces: list[RunTrace]) -> AggregateSeries:
    """Per-step, per-channel mean and population std across traces."""
    if not traces:
        raise InvalidParameterError("cannot aggregate an empty trace list")
    horizon = traces[0].horizon
    if any(t.horizon != horizon for t in traces):
        raise ShapeError("traces have mismatched horizons")
    mean: dict[str, np.ndarray] = {}
    std: dict[str, np.ndarray] = {}
    for name in RunTrace.CHANNELS:
        stacked = np.stack([getattr(t, name) for t in traces])
        mean[name] = stacked.mean(axis=0)
        std[name] = stacked.std(axis=0)
    return AggregateSeries(len(traces), mean, std)
