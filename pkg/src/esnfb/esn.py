"""Leaky echo state network with a shared linear readout.

The same weight structure serves two roles in the closed loop: a control-side
instance driven by the future reference window, and a learning-side instance
driven by the measured-output history. They share the recurrent matrix, the
input layer, and the readout; only their states differ.

State update (componentwise tanh):

    x' = (1 - gamma) * x + gamma * tanh(W_r x + W_in window)

Initialization recipe: recurrent weights drawn entrywise from U(-0.5, 0.5)
(row-major order) and rescaled to the target spectral radius; input weights
from U(-1, 1) times ``input_scale``; readout from N(0, 1) times
``output_init_scale``. The initial state is drawn from U(-1, 1) per component
and then settled by a zero-input washout -- starting the washout from exactly
zero would make it a no-op, since zero is a fixed point of the zero-input
dynamics, and the fading-memory property makes the settled state insensitive
to the draw.

Draw accounting for one ``init_esn`` call: r*r + r*delta uniforms, r normals,
then r uniforms per washed state. Washout itself consumes no randomness.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidParameterError, ShapeError
from .stochastics import Rng


@dataclass(frozen=True)
class EsnConfig:
    """Initialization recipe for a reservoir of ``r`` nodes and tap size ``delta``."""

    r: int = 50
    delta: int = 5
    gamma: float = 0.8
    spectral_target: float = 0.8
    input_scale: float = 0.1
    output_init_scale: float = 0.01
    washout_steps: int = 100

    def __post_init__(self):
        if self.r < 1 or self.delta < 1:
            raise InvalidParameterError(f"need r >= 1 and delta >= 1, got {self}")
        if not 0.0 <= self.gamma < 1.0:
            raise InvalidParameterError(f"leaky rate must lie in [0, 1), got {self.gamma}")
        if self.spectral_target <= 0:
            raise InvalidParameterError("spectral target must be positive")
        if self.washout_steps < 0:
            raise InvalidParameterError("washout steps must be >= 0")


@dataclass
class EsnParams:
    """Fixed weights shared by both reservoir instances."""

    gamma: float
    w_r: np.ndarray   # (r, r) recurrent weights
    w_in: np.ndarray  # (r, delta) input weights

    @property
    def r(self) -> int:
        return self.w_r.shape[0]

    @property
    def delta(self) -> int:
        return self.w_in.shape[1]


def init_esn(rng: Rng, cfg: EsnConfig) -> tuple[EsnParams, np.ndarray, np.ndarray]:
    """Draw weights per the recipe; return (params, washed-out state, readout)."""
    w_r = rng.uniform_array(-0.5, 0.5, cfg.r * cfg.r).reshape(cfg.r, cfg.r)
    w_r = linalg.scale_to_spectral_radius(w_r, cfg.spectral_target)
    w_in = rng.uniform_array(-1.0, 1.0, cfg.r * cfg.delta).reshape(cfg.r, cfg.delta)
    w_in = w_in * cfg.input_scale
    w_out = rng.normal_array(0.0, 1.0, cfg.r) * cfg.output_init_scale
    params = EsnParams(cfg.gamma, w_r, w_in)
    state = washed_state(rng, params, cfg.washout_steps)
    return params, state, w_out


def washed_state(rng: Rng, params: EsnParams, steps: int = 100) -> np.ndarray:
    """A fresh state: U(-1, 1) per component, settled by a zero-input washout."""
    return washout(params, rng.uniform_array(-1.0, 1.0, params.r), steps)


def washout(params: EsnParams, state: np.ndarray, steps: int) -> np.ndarray:
    """Run ``steps`` zero-input updates from ``state``."""
    if steps < 0:
        raise InvalidParameterError(f"washout steps must be >= 0, got {steps}")
    window = np.zeros(params.delta)
    for _ in range(steps):
        state = esn_step(params, state, window)
    return state


def esn_step(params: EsnParams, state: np.ndarray, window: np.ndarray) -> np.ndarray:
    """One leaky state update driven by a length-``delta`` input window."""
    if len(window) != params.delta:
        raise ShapeError(f"window length {len(window)} != tap size {params.delta}")
    pre = linalg.matvec(params.w_r, state)
    pre += linalg.matvec(params.w_in, window)
    return (1.0 - params.gamma) * state + params.gamma * np.tanh(pre)


def esn_output(readout: np.ndarray, state: np.ndarray) -> float:
    """Linear readout: dot product of the output weights with the state."""
    if readout.shape != state.shape:
        raise ShapeError(f"readout shape {readout.shape} != state shape {state.shape}")
    return float(readout @ state)
