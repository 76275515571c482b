import numpy as np

from esnfb.closed_loop import RunTrace


def make_trace(horizon, **channels):
    """A RunTrace of zeros with selected channels overridden."""
    data = {name: np.zeros(horizon, dtype=float) for name in RunTrace.CHANNELS}
    for name, values in channels.items():
        arr = np.asarray(values, dtype=float)
        assert arr.shape == (horizon,)
        data[name] = arr
    return RunTrace(**data)
