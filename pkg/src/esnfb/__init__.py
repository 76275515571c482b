"""Deterministic closed-loop control experiments built around echo state
networks trained online with recursive least squares, with an optional
proportional-derivative feedback accelerator.

The public surface re-exported here: episode configuration and execution
(`EpisodeConfig`, `run_episode`, `RunTrace`), the building blocks (reservoir,
readout update, plant, reference signals, control laws), cross-seed metrics,
and the experiment registry/batch runner behind the `esnfb` command.
"""

from .closed_loop import (
    EpisodeConfig,
    PretrainConfig,
    Randomization,
    RlsConfig,
    RunTrace,
    pretrain_tesn,
    run_episode,
)
from .control import ControlMethod, PdGains, compose_output, pd_output, saturate
from .errors import (
    DegenerateMatrixError,
    EsnfbError,
    InvalidParameterError,
    NumericalError,
    ShapeError,
)
from .esn import EsnConfig, EsnParams, esn_output, esn_step, init_esn, washed_state, washout
from .harness import (
    Arm,
    ArmResult,
    Experiment,
    ExperimentSummary,
    apply_overrides,
    episode_seed,
    get_experiment,
    registry,
    run_arm,
    run_experiment,
    write_outputs,
)
from .metrics import (
    DEFAULT_HOLD,
    DEFAULT_TOL,
    AggregateSeries,
    aggregate,
    convergence_step,
    overshoot,
    window_rmse,
)
from .plant import PlantState, PlantVariant, plant_step, sense
from .rls import RlsState, RlsUpdateResult, rls_init, rls_update
from .signals import (
    ComplexSignal,
    ReferenceSignal,
    StepSignal,
    future_window,
    reference_at,
    reference_series,
)
from .stochastics import Rng

__version__ = "0.1.0"

__all__ = [
    "AggregateSeries",
    "Arm",
    "ArmResult",
    "ComplexSignal",
    "ControlMethod",
    "DEFAULT_HOLD",
    "DEFAULT_TOL",
    "DegenerateMatrixError",
    "EpisodeConfig",
    "EsnConfig",
    "EsnParams",
    "EsnfbError",
    "Experiment",
    "ExperimentSummary",
    "InvalidParameterError",
    "NumericalError",
    "PdGains",
    "PlantState",
    "PlantVariant",
    "PretrainConfig",
    "Randomization",
    "ReferenceSignal",
    "RlsConfig",
    "RlsState",
    "RlsUpdateResult",
    "Rng",
    "RunTrace",
    "ShapeError",
    "StepSignal",
    "aggregate",
    "apply_overrides",
    "compose_output",
    "convergence_step",
    "episode_seed",
    "esn_output",
    "esn_step",
    "future_window",
    "get_experiment",
    "init_esn",
    "overshoot",
    "pd_output",
    "plant_step",
    "pretrain_tesn",
    "reference_at",
    "reference_series",
    "registry",
    "rls_init",
    "rls_update",
    "run_arm",
    "run_episode",
    "run_experiment",
    "saturate",
    "sense",
    "washed_state",
    "washout",
    "window_rmse",
    "write_outputs",
]
