"""Per-step wiring of the full control loop.

One episode couples, in a fixed order: the sensor, the P-D feedback law, the
control-side reservoir fed by the future reference window, the composition
rule and saturation, the plant, the learning-side reservoir fed by the
measured-output history, and the recursive least-squares readout update with
delay-matched targets.

Pipeline at step k (the order is load-bearing; no stage may use information
unavailable at time k):

1. Sense the measured output ytilde_k = y_k + noise (the plant starts at
   rest, so y_0 = 0).
2. Form the tracking error etilde_k = yd_k - ytilde_k and the feedback
   adjustment ub_k via the P-D law (ytilde at step -1 is taken as 0).
3. Advance the control-side reservoir on the future reference window
   [yd_{k+1}, ..., yd_{k+delta}] and read the feedforward uf_k from the
   post-update state, using the readout produced by the step-(k-1) update.
4. Compose the raw output u_k for the active method (with ubar_{-1} = 0 and
   uf_{-1} = 0) and saturate it to ubar_k.
5. Remember ubar_k; it becomes the learning target delta steps later.
6. Advance the plant under ubar_k (switching dynamics variant first if the
   schedule says so: the variant listed for start index s drives the step
   taken at k = s).
7. Advance the learning-side reservoir on the measured-output window
   [ytilde_{k-delta+1}, ..., ytilde_k] (zeros before step 0: plant at rest).
8. If k >= delta, run one recursive least-squares update pairing the
   post-update learning-side state with the target ubar_{k-delta}, and share
   the new readout with the control side for step k+1. Earlier steps skip
   the update: their target does not exist, and training on fictitious
   zero targets would bias the inverse model.

Episode randomness comes from a single per-episode stream in a fixed draw
order: reservoir/readout initialization first (including the two washout
start states, control side then learning side), then the pre-training phase
if any (two draws per pre-training step: input, then sensor), then exactly
one sensor draw per control step. Episodes with a ``randomize`` block draw
their hyperparameters before any of this. The FB method builds no reservoir
and consumes no initialization draws.

Pre-training (the TESN method) excites a scratch plant from rest with
saturated Gaussian inputs and runs the same learning-side update loop on the
resulting measurements: at pre-training step t, draw the input and apply it,
sense the new output, absorb the window ending at that output, and once the
window is full update with the input whose response is the oldest window
element — the same (window, target) relation the control phase trains on.
Only the readout and the inverse-correlation matrix carry over into the
control phase; the control phase still starts from the plant at rest and the
washed-out reservoir states, and online learning continues throughout it.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import esn, plant, rls
from .control import ControlMethod, PdGains, compose_output, pd_output, saturate
from .errors import InvalidParameterError, NumericalError
from .esn import EsnConfig
from .plant import PlantState, PlantVariant
from .signals import ComplexSignal, ReferenceSignal, StepSignal, reference_series
from .stochastics import Rng


@dataclass(frozen=True)
class RlsConfig:
    alpha: float = 1.0
    lam: float = 1.0 - 1e-3


@dataclass(frozen=True)
class PretrainConfig:
    """Random-excitation pre-training: saturate(N(input_mean, input_std)) inputs."""

    steps: int = 100
    input_mean: float = 1.0
    input_std: float = 0.3


@dataclass(frozen=True)
class Randomization:
    """Per-episode hyperparameter draws, taken from the episode stream before
    any other draw.

    rls: alpha = 10**U(-1, 1), then lam = 1 - 10**U(-4, -2)
    pd:  k_p = U(0, 0.01), then k_d = U(0, 1e-4)
    """

    rls: bool = False
    pd: bool = False


@dataclass(frozen=True)
class EpisodeConfig:
    """Everything one episode needs; fully serializable, deterministic given seed."""

    method: ControlMethod
    signal: ReferenceSignal
    horizon: int
    seed: int = 0
    esn: EsnConfig = field(default_factory=EsnConfig)
    rls: RlsConfig = field(default_factory=RlsConfig)
    gains: PdGains = field(default_factory=PdGains)
    plant_variant_schedule: tuple[tuple[int, PlantVariant], ...] = ((0, PlantVariant.A),)
    noise_std: float = 0.01
    pretrain: PretrainConfig | None = None
    randomize: Randomization | None = None

    def __post_init__(self):
        if self.horizon < 1:
            raise InvalidParameterError(f"horizon must be >= 1, got {self.horizon}")
        if self.noise_std < 0:
            raise InvalidParameterError("noise std must be >= 0")
        starts = [s for s, _ in self.plant_variant_schedule]
        if not starts or starts[0] != 0 or sorted(set(starts)) != starts:
            raise InvalidParameterError(
                f"plant schedule must start at 0 with strictly increasing indices, got {starts}"
            )
        if (self.pretrain is not None) != (self.method is ControlMethod.TESN):
            raise InvalidParameterError("pretrain block must be present iff method is TESN")

    def to_dict(self) -> dict:
        sig = {"kind": "step" if isinstance(self.signal, StepSignal) else "complex"}
        sig.update({k: v for k, v in vars(self.signal).items()})
        d = {
            "method": self.method.value,
            "signal": sig,
            "horizon": self.horizon,
            "seed": self.seed,
            "esn": vars(self.esn).copy(),
            "rls": vars(self.rls).copy(),
            "gains": vars(self.gains).copy(),
            "plant_variant_schedule": [[s, v.value] for s, v in self.plant_variant_schedule],
            "noise_std": self.noise_std,
            "pretrain": None if self.pretrain is None else vars(self.pretrain).copy(),
            "randomize": None if self.randomize is None else vars(self.randomize).copy(),
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EpisodeConfig":
        sig_d = dict(d["signal"])
        kind = sig_d.pop("kind")
        signal = StepSignal(**sig_d) if kind == "step" else ComplexSignal(**sig_d)
        return cls(
            method=ControlMethod(d["method"]),
            signal=signal,
            horizon=int(d["horizon"]),
            seed=int(d["seed"]),
            esn=EsnConfig(**d["esn"]),
            rls=RlsConfig(**d["rls"]),
            gains=PdGains(**d["gains"]),
            plant_variant_schedule=tuple((int(s), PlantVariant(v)) for s, v in d["plant_variant_schedule"]),
            noise_std=float(d["noise_std"]),
            pretrain=None if d.get("pretrain") is None else PretrainConfig(**d["pretrain"]),
            randomize=None if d.get("randomize") is None else Randomization(**d["randomize"]),
        )


@dataclass
class RunTrace:
    """Per-step record of every signal in the loop.

    e_esn is 0 at steps that ran no readout update (k < delta, or the FB
    method throughout).
    """

    y_d: np.ndarray
    y: np.ndarray
    y_tilde: np.ndarray
    e_tilde: np.ndarray
    u_f: np.ndarray
    u_b: np.ndarray
    u: np.ndarray
    u_bar: np.ndarray
    e_esn: np.ndarray

    CHANNELS = ("y_d", "y", "y_tilde", "e_tilde", "u_f", "u_b", "u", "u_bar", "e_esn")

    @property
    def horizon(self) -> int:
        return len(self.y_d)


def pretrain_tesn(
    cfg: EpisodeConfig,
    rng: Rng,
    params: esn.EsnParams,
    w_out: np.ndarray,
    rls_state: rls.RlsState,
    state_l: np.ndarray,
) -> tuple[np.ndarray, rls.RlsState]:
    """Adapt (readout, P) on random saturated inputs; see the module docstring.

    Operates on a scratch plant and a scratch copy of the learning-side
    state; two draws per step (input, then sensor).
    """
    pre = cfg.pretrain
    delta = params.delta
    p_state = PlantState(variant=cfg.plant_variant_schedule[0][1])
    x_l = state_l.copy()
    window = np.zeros(delta)
    u_hist = np.zeros(pre.steps)
    for t in range(pre.steps):
        u_bar = saturate(rng.normal(pre.input_mean, pre.input_std))
        u_hist[t] = u_bar
        p_state = plant.plant_step(p_state, u_bar)
        y_tilde = plant.sense(p_state.y_curr, rng, cfg.noise_std)
        window[:-1] = window[1:]
        window[-1] = y_tilde
        x_l = esn.esn_step(params, x_l, window)
        # the window now holds the responses to inputs t-delta+1 .. t, so
        # the target making this pairing identical to the control phase
        # (input whose response is the oldest window element) is t-delta+1
        if t >= delta - 1:
            result = rls.rls_update(rls_state, w_out, x_l, u_hist[t - delta + 1])
            w_out = result.w_out
    return w_out, rls_state


def run_episode(cfg: EpisodeConfig) -> RunTrace:
    """Run one full episode; deterministic given ``cfg.seed``.

    Raises NumericalError (with the step index) if any loop signal becomes
    non-finite.
    """
    rng = Rng(cfg.seed)
    method = cfg.method
    delta = cfg.esn.delta
    horizon = cfg.horizon

    rls_cfg = cfg.rls
    gains = cfg.gains
    if cfg.randomize is not None:
        if cfg.randomize.rls:
            alpha = 10.0 ** rng.uniform(-1.0, 1.0)
            lam = 1.0 - 10.0 ** rng.uniform(-4.0, -2.0)
            rls_cfg = RlsConfig(alpha=alpha, lam=lam)
        if cfg.randomize.pd:
            gains = PdGains(k_p=rng.uniform(0.0, 0.01), k_d=rng.uniform(0.0, 1e-4))

    params = w_out = x_c = x_l = None
    rls_state = None
    if method.uses_esn:
        params, x_c, w_out = esn.init_esn(rng, cfg.esn)
        x_l = esn.washed_state(rng, params, cfg.esn.washout_steps)
        rls_state = rls.rls_init(rls_cfg.alpha, cfg.esn.r, rls_cfg.lam)
        if cfg.pretrain is not None:
            w_out, rls_state = pretrain_tesn(cfg, rng, params, w_out, rls_state, x_l)

    # reference values through k = horizon - 1 + delta feed the future window
    y_d_ext = reference_series(cfg.signal, horizon + delta)
    trace = RunTrace(*(np.zeros(horizon) for _ in RunTrace.CHANNELS))
    trace.y_d[:] = y_d_ext[:horizon]

    p_state = PlantState(variant=cfg.plant_variant_schedule[0][1])
    switch_points = dict(cfg.plant_variant_schedule)
    window_l = np.zeros(delta)
    y_tilde_prev = 0.0
    u_bar_prev = 0.0
    u_f_prev = 0.0

    for k in range(horizon):
        y_k = p_state.y_curr
        y_tilde = plant.sense(y_k, rng, cfg.noise_std)
        e_tilde = y_d_ext[k] - y_tilde
        u_b = pd_output(gains, e_tilde, y_tilde_prev, y_tilde)

        if method.uses_esn:
            x_c = esn.esn_step(params, x_c, y_d_ext[k + 1 : k + 1 + delta])
            u_f = esn.esn_output(w_out, x_c)
        else:
            u_f = 0.0

        u = compose_output(method, u_bar_prev, u_f, u_f_prev, u_b)
        u_bar = saturate(u)
        if not np.isfinite(u_bar):
            raise NumericalError("control output diverged", step=k)

        if k in switch_points and p_state.variant is not switch_points[k]:
            p_state = replace(p_state, variant=switch_points[k])
        try:
            p_state = plant.plant_step(p_state, u_bar)
        except NumericalError as exc:
            raise NumericalError(str(exc), step=k) from exc

        e_esn = 0.0
        if method.uses_esn:
            window_l[:-1] = window_l[1:]
            window_l[-1] = y_tilde
            x_l = esn.esn_step(params, x_l, window_l)
            if k >= delta:
                result = rls.rls_update(rls_state, w_out, x_l, trace.u_bar[k - delta])
                w_out = result.w_out
                e_esn = result.e_esn

        trace.y[k] = y_k
        trace.y_tilde[k] = y_tilde
        trace.e_tilde[k] = e_tilde
        trace.u_f[k] = u_f
        trace.u_b[k] = u_b
        trace.u[k] = u
        trace.u_bar[k] = u_bar
        trace.e_esn[k] = e_esn

        y_tilde_prev = y_tilde
        u_bar_prev = u_bar
        u_f_prev = u_f

    return trace
