"""Experiment registry and batch runner.

An experiment is a named set of labelled arms, each arm one episode template
run across many seeds. Per-episode seeds derive from
``(base_seed, arm_index, episode_index)``, so distinct arms never share a
stream and adding seeds never reshuffles existing ones.

``run_experiment`` writes, under ``out_dir/<experiment>/``:

* ``<arm>.csv`` — per-step cross-seed aggregate: columns ``step``, ``ref``,
  then ``<channel>_mean``, ``<channel>_std`` for each of ``y``, ``err``,
  ``uf``, ``ub``, ``ubar``. Floats are rendered with ``%.17g`` so a rerun is
  byte-identical.
* ``<arm>_episodes.json`` — the resolved episode template plus one record
  per seed (seed value, final-window error statistics, convergence step,
  failure details when the loop diverged).
* ``summary.json`` — cross-seed statistics per arm.

Episodes that diverge (NumericalError) are excluded from the aggregates and
listed in the episode records and the summary.
"""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .closed_loop import (
    EpisodeConfig,
    PretrainConfig,
    Randomization,
    RunTrace,
    run_episode,
)
from .control import ControlMethod
from .errors import InvalidParameterError, NumericalError
from .metrics import AggregateSeries, aggregate, convergence_step, window_rmse
from .plant import PlantVariant
from .signals import ComplexSignal, StepSignal
from .stochastics import Rng

# (csv column stem, trace channel) in fixed output order
CSV_CHANNELS = (
    ("y", "y"),
    ("err", "e_tilde"),
    ("uf", "u_f"),
    ("ub", "u_b"),
    ("ubar", "u_bar"),
)

# (csv column, trace channel) for single-episode dumps
TRACE_COLUMNS = (
    ("yd", "y_d"),
    ("y", "y"),
    ("ytilde", "y_tilde"),
    ("etilde", "e_tilde"),
    ("uf", "u_f"),
    ("ub", "u_b"),
    ("u", "u"),
    ("ubar", "u_bar"),
    ("eesn", "e_esn"),
)


@dataclass(frozen=True)
class Arm:
    """One labelled episode family within an experiment."""

    label: str
    config: EpisodeConfig


@dataclass(frozen=True)
class Experiment:
    """A named bundle of arms plus the sweep defaults used to run them."""

    name: str
    description: str
    arms: tuple[Arm, ...]
    n_seeds: int = 100
    # trailing steps of each run used for the summary error statistics
    final_window: int = 200

    def __post_init__(self):
        labels = [a.label for a in self.arms]
        if len(set(labels)) != len(labels):
            raise InvalidParameterError(f"duplicate arm labels in experiment {self.name!r}")
        if self.n_seeds < 1:
            raise InvalidParameterError(f"n_seeds must be >= 1, got {self.n_seeds}")
        if self.final_window < 1:
            raise InvalidParameterError(f"final_window must be >= 1, got {self.final_window}")


@dataclass
class ArmResult:
    label: str
    arm_index: int
    config: EpisodeConfig
    episodes: list[dict]
    aggregate: AggregateSeries | None
    traces: list[RunTrace | None] = field(default_factory=list)

    @property
    def ok_traces(self) -> list[RunTrace]:
        return [t for t in self.traces if t is not None]

    def metric(self, key: str) -> list:
        """Values of one per-episode metric across the non-failed runs."""
        return [r[key] for r in self.episodes if not r["failed"]]


@dataclass
class ExperimentSummary:
    experiment: str
    base_seed: int
    n_seeds: int
    final_window: int
    arms: dict[str, ArmResult]

    def to_dict(self) -> dict:
        out = {
            "experiment": self.experiment,
            "base_seed": self.base_seed,
            "n_seeds": self.n_seeds,
            "final_window": self.final_window,
            "arms": {},
        }
        for label, res in self.arms.items():
            failures = [r for r in res.episodes if r["failed"]]
            conv = [c for c in res.metric("convergence_step") if c is not None]
            out["arms"][label] = {
                "arm_index": res.arm_index,
                "n_ok": len(res.episodes) - len(failures),
                "n_failed": len(failures),
                "failures": failures,
                "rmse_final": _stats(res.metric("rmse_final")),
                "mae_final": _stats(res.metric("mae_final")),
                "convergence_step": {
                    "n_converged": len(conv),
                    "median": float(np.median(conv)) if conv else None,
                },
            }
        return out


def _stats(values: list[float]) -> dict | None:
    if not values:
        return None
    arr = np.asarray(values, dtype=float)
    return {
        "mean": float(arr.mean()),
        "std": float(arr.std()),
        "median": float(np.median(arr)),
    }


def episode_seed(base_seed: int, arm_index: int, episode_index: int) -> int:
    return Rng.derive_seed(base_seed, arm_index, episode_index)


def run_arm(
    arm: Arm,
    arm_index: int,
    n_seeds: int,
    base_seed: int = 0,
    final_window: int = 200,
) -> ArmResult:
    """Run one arm over ``n_seeds`` derived seeds and aggregate the traces."""
    records: list[dict] = []
    traces: list[RunTrace | None] = []
    for i in range(n_seeds):
        seed = episode_seed(base_seed, arm_index, i)
        cfg = replace(arm.config, seed=seed)
        record = {"seed_index": i, "seed": seed, "failed": False, "failure_step": None}
        try:
            trace = run_episode(cfg)
        except NumericalError as exc:
            record.update(
                failed=True,
                failure_step=exc.step,
                error=str(exc),
                rmse_final=None,
                mae_final=None,
                convergence_step=None,
            )
            traces.append(None)
        else:
            start = max(0, cfg.horizon - final_window)
            record.update(
                rmse_final=window_rmse(trace, start, cfg.horizon),
                mae_final=float(np.mean(np.abs(trace.e_tilde[start:]))),
                convergence_step=convergence_step(trace),
            )
            traces.append(trace)
        records.append(record)
    ok = [t for t in traces if t is not None]
    return ArmResult(
        label=arm.label,
        arm_index=arm_index,
        config=arm.config,
        episodes=records,
        aggregate=aggregate(ok) if ok else None,
        traces=traces,
    )


def run_experiment(
    exp: Experiment,
    base_seed: int = 0,
    out_dir: str | Path | None = None,
    n_seeds: int | None = None,
    overrides: dict | None = None,
    keep_traces: bool = False,
) -> ExperimentSummary:
    """Run every arm of ``exp``; write result files when ``out_dir`` is given."""
    n = exp.n_seeds if n_seeds is None else n_seeds
    if n < 1:
        raise InvalidParameterError(f"n_seeds must be >= 1, got {n}")
    results: dict[str, ArmResult] = {}
    for idx, arm in enumerate(exp.arms):
        if overrides:
            arm = Arm(arm.label, apply_overrides(arm.config, overrides))
        res = run_arm(arm, idx, n, base_seed, exp.final_window)
        if not keep_traces:
            res.traces = []
        results[arm.label] = res
    summary = ExperimentSummary(exp.name, base_seed, n, exp.final_window, results)
    if out_dir is not None:
        write_outputs(summary, out_dir)
    return summary


def write_outputs(summary: ExperimentSummary, out_dir: str | Path) -> Path:
    """Write the per-arm CSVs, episode records and summary under ``out_dir``."""
    root = Path(out_dir) / summary.experiment
    root.mkdir(parents=True, exist_ok=True)
    for label, res in summary.arms.items():
        if res.aggregate is not None:
            _write_lines(root / f"{label}.csv", aggregate_csv_lines(res.aggregate))
        payload = {
            "experiment": summary.experiment,
            "arm": label,
            "arm_index": res.arm_index,
            "base_seed": summary.base_seed,
            "config": res.config.to_dict(),
            "episodes": res.episodes,
        }
        _write_json(root / f"{label}_episodes.json", payload)
    _write_json(root / "summary.json", summary.to_dict())
    return root


def aggregate_csv_lines(agg: AggregateSeries) -> list[str]:
    header = ["step", "ref"]
    for stem, _ in CSV_CHANNELS:
        header += [f"{stem}_mean", f"{stem}_std"]
    lines = [",".join(header)]
    ref = agg.mean["y_d"]
    for k in range(agg.horizon):
        row = [str(k), _fmt(ref[k])]
        for _, channel in CSV_CHANNELS:
            row.append(_fmt(agg.mean[channel][k]))
            row.append(_fmt(agg.std[channel][k]))
        lines.append(",".join(row))
    return lines


def trace_csv_lines(trace: RunTrace) -> list[str]:
    lines = ["step," + ",".join(stem for stem, _ in TRACE_COLUMNS)]
    for k in range(trace.horizon):
        row = [str(k)]
        row += [_fmt(getattr(trace, channel)[k]) for _, channel in TRACE_COLUMNS]
        lines.append(",".join(row))
    return lines


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_lines(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


def _write_json(path: Path, obj) -> None:
    path.write_text(
        json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="ascii", newline="\n"
    )


def apply_overrides(cfg: EpisodeConfig, overrides: dict) -> EpisodeConfig:
    """Rebuild ``cfg`` with a (possibly nested) dict of field overrides.

    Unknown keys are rejected. Changing the signal ``kind`` replaces the
    whole signal block (unset fields fall back to that kind's defaults).
    """
    d = cfg.to_dict()
    _deep_merge(d, overrides)
    return EpisodeConfig.from_dict(d)


def _deep_merge(base: dict, extra: dict) -> None:
    for key, value in extra.items():
        if key not in base:
            raise InvalidParameterError(f"unknown config key {key!r}")
        if (
            key == "signal"
            and isinstance(value, dict)
            and value.get("kind") not in (None, base[key]["kind"])
        ):
            base[key] = dict(value)
        elif isinstance(base[key], dict) and isinstance(value, dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value


def _method_arms(signal, horizon: int) -> tuple[Arm, ...]:
    arms = []
    for method in ControlMethod:
        pre = PretrainConfig() if method is ControlMethod.TESN else None
        cfg = EpisodeConfig(method=method, signal=signal, horizon=horizon, pretrain=pre)
        arms.append(Arm(method.value, cfg))
    return tuple(arms)


def registry() -> list[Experiment]:
    """All predefined experiments, in a stable order."""
    step_sig = StepSignal()
    complex6 = ComplexSignal()
    complex8 = ComplexSignal(horizon=8000)
    switch = ((0, PlantVariant.A), (2000, PlantVariant.B))
    tesn = ControlMethod.TESN

    def cfg(method, signal, horizon, **kw):
        return EpisodeConfig(method=method, signal=signal, horizon=horizon, **kw)

    return [
        Experiment(
            "step-comparison",
            "All four methods on the step reference.",
            _method_arms(step_sig, 2000),
            final_window=200,
        ),
        Experiment(
            "tracking-comparison",
            "All four methods on the two-tone reference.",
            _method_arms(complex6, 6000),
            final_window=1000,
        ),
        Experiment(
            "output-decomposition",
            "Feedforward/feedback split of the combined controller's output "
            "on the two-tone reference.",
            (Arm("esnfb", cfg(ControlMethod.ESN_FB, complex6, 6000)),),
            final_window=1000,
        ),
        Experiment(
            "disturbance",
            "Plant dynamics switch from variant A to B at step 2000.",
            (
                Arm(
                    "esnfb",
                    cfg(ControlMethod.ESN_FB, complex8, 8000, plant_variant_schedule=switch),
                ),
                Arm(
                    "tesn",
                    cfg(
                        tesn,
                        complex8,
                        8000,
                        plant_variant_schedule=switch,
                        pretrain=PretrainConfig(),
                    ),
                ),
            ),
            final_window=1000,
        ),
        Experiment(
            "rand-rls",
            "Combined controller with the readout-update hyperparameters "
            "redrawn per episode: alpha = 10**U(-1, 1), lam = 1 - 10**U(-4, -2).",
            (
                Arm(
                    "esnfb",
                    cfg(
                        ControlMethod.ESN_FB,
                        complex6,
                        6000,
                        randomize=Randomization(rls=True),
                    ),
                ),
            ),
            final_window=1000,
        ),
        Experiment(
            "rand-pd",
            "Combined controller with the feedback gains redrawn per episode: "
            "k_p = U(0, 0.01), k_d = U(0, 1e-4).",
            (
                Arm(
                    "esnfb",
                    cfg(
                        ControlMethod.ESN_FB,
                        complex6,
                        6000,
                        randomize=Randomization(pd=True),
                    ),
                ),
            ),
            final_window=1000,
        ),
        Experiment(
            "rand-rls-esn",
            "Feedforward-only controllers under per-episode readout-update "
            "hyperparameter draws.",
            (
                Arm(
                    "esn",
                    cfg(
                        ControlMethod.ESN,
                        complex6,
                        6000,
                        randomize=Randomization(rls=True),
                    ),
                ),
                Arm(
                    "tesn",
                    cfg(
                        tesn,
                        complex6,
                        6000,
                        randomize=Randomization(rls=True),
                        pretrain=PretrainConfig(),
                    ),
                ),
            ),
            final_window=1000,
        ),
        Experiment(
            "tesn-dist-step",
            "Pre-trained feedforward controller on the step reference with "
            "pre-training inputs drawn near, around, or far from the "
            "operating range.",
            (
                Arm(
                    "tesn-near",
                    cfg(tesn, step_sig, 2000, pretrain=PretrainConfig(100, 0.15, 0.05)),
                ),
                Arm("tesn-base", cfg(tesn, step_sig, 2000, pretrain=PretrainConfig())),
                Arm(
                    "tesn-far",
                    cfg(tesn, step_sig, 2000, pretrain=PretrainConfig(100, 2.4, 0.8)),
                ),
            ),
            final_window=200,
        ),
        Experiment(
            "tesn-dist-complex",
            "Pre-trained feedforward controller on the two-tone reference "
            "with pre-training inputs drawn near, around, or far from the "
            "operating range.",
            (
                Arm(
                    "tesn-near",
                    cfg(tesn, complex6, 6000, pretrain=PretrainConfig(100, 0.24, 0.08)),
                ),
                Arm("tesn-base", cfg(tesn, complex6, 6000, pretrain=PretrainConfig())),
                Arm(
                    "tesn-far",
                    cfg(tesn, complex6, 6000, pretrain=PretrainConfig(100, 1.5, 0.5)),
                ),
            ),
            final_window=1000,
        ),
        Experiment(
            "tesn-dist-robustness",
            "Pre-trained feedforward controller with well-matched "
            "pre-training inputs, stressed by a dynamics switch and by "
            "readout-update hyperparameter draws.",
            (
                Arm(
                    "disturbance",
                    cfg(
                        tesn,
                        complex8,
                        8000,
                        plant_variant_schedule=switch,
                        pretrain=PretrainConfig(100, 0.24, 0.08),
                    ),
                ),
                Arm(
                    "rand-rls",
                    cfg(
                        tesn,
                        complex6,
                        6000,
                        randomize=Randomization(rls=True),
                        pretrain=PretrainConfig(100, 0.24, 0.08),
                    ),
                ),
            ),
            final_window=1000,
        ),
    ]


# short aliases accepted anywhere an experiment name is
ALIASES = {
    "step": "step-comparison",
    "tracking": "tracking-comparison",
    "decomposition": "output-decomposition",
}


def get_experiment(name: str) -> Experiment:
    name = ALIASES.get(name, name)
    for exp in registry():
        if exp.name == name:
            return exp
    known = ", ".join(e.name for e in registry())
    raise InvalidParameterError(f"unknown experiment {name!r}; known: {known}")
