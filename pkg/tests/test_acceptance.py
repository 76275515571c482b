"""End-to-end acceptance gate.

One test per acceptance criterion, run at the pinned desk scale: base seed 0,
the default r=50 / delta=5 reservoir, and at least 100 seeds per arm. Two
sweeps use more than the minimum because their statistics need it: the
tracking comparison averages error series across seeds before taking an RMS,
an estimator whose noise-cancellation bias shrinks with the seed count, and
the sensitivity contrast measures a cross-seed std that is dominated by rare
(~1%) collapse seeds, so the sample must be large enough to contain some.
Heavy sweeps are shared through module-scoped fixtures that reduce each arm's
traces to scalar metrics immediately, so the suite stays within a few hundred
MB and several minutes of CPU. Each test finishes by printing one line with
the measured numbers behind the verdict.
"""

import numpy as np
import pytest

from conftest import make_trace
from esnfb.closed_loop import run_episode
from esnfb.control import saturate
from esnfb.esn import EsnConfig, init_esn
from esnfb.harness import get_experiment, run_arm, run_experiment
from esnfb.linalg import spectral_radius
from esnfb.metrics import aggregate, convergence_step
from esnfb.plant import PlantState, plant_step
from esnfb.rls import rls_init, rls_update
from esnfb.signals import ComplexSignal, StepSignal, future_window, reference_at
from esnfb.stochastics import Rng

N_SEEDS = 100
BASE_SEED = 0
# The mean error series of the feedback-only arm settles near a fixed RMS
# while the combined arm's keeps shrinking as sensor noise cancels across
# seeds; 200 seeds puts the estimate close to its asymptote.
TRACKING_SEEDS = 200
# Cross-seed rmse std for the feedforward-only arms is carried by collapse
# seeds occurring at roughly a 1% rate (8 in the first 600), so a 100-seed
# sample can miss them entirely; 300 seeds keeps the expected count above 3.
SENSITIVITY_SEEDS = 300

# criterion thresholds, collected in one place
RLS_ORACLE_RTOL = 1e-6
RADIUS_TARGET, RADIUS_TOL = 0.8, 1e-6
INPUT_WEIGHT_BOUND = 0.1
STEP_GOOD_MAE = 0.05
STEP_BAD_MAE = 0.3
TESN_STEP_STD_FACTOR = 3.0
TRACKING_FB_FACTOR = 5.0
DECAY_FRACTION = 0.1
RECOVERY_TOL_FRACTION = 0.1  # of the reference signal's amplitude
RECOVERY_WITHIN = 2500
TESN_RECOVERY_FACTOR = 1.5
ROBUSTNESS_FACTOR = 2.0
SENSITIVITY_FACTOR = 3.0


def reduce_experiment(name, n_seeds=N_SEEDS, base_seed=BASE_SEED):
    """Run every arm of an experiment and keep only scalar reductions."""
    exp = get_experiment(name)
    out = {}
    for idx, arm in enumerate(exp.arms):
        res = run_arm(arm, idx, n_seeds, base_seed, exp.final_window)
        config = arm.config
        horizon = config.horizon
        tail = slice(horizon - exp.final_window, horizon)
        tail20 = slice(int(round(horizon * 0.8)), horizon)
        traces = res.ok_traces
        agg = res.aggregate
        reduced = {
            "n_failed": len(res.episodes) - len(traces),
            "rmse": np.asarray(res.metric("rmse_final"), dtype=float),
            "mae": np.asarray(res.metric("mae_final"), dtype=float),
            "mean_err_tail_rms": float(
                np.sqrt(np.mean(agg.mean["e_tilde"][tail] ** 2))
            ),
            "decay_residual": float(
                np.mean([np.abs(t.u_bar[tail20] - t.u_f[tail20]).mean() for t in traces])
            ),
            "decay_total": float(
                np.mean([np.abs(t.u_bar[tail20]).mean() for t in traces])
            ),
        }
        if len(config.plant_variant_schedule) > 1:
            switch = config.plant_variant_schedule[1][0]
            sig = config.signal
            amplitude = (
                sig.amplitude if isinstance(sig, StepSignal) else sig.amp1 + sig.amp2
            )
            tol = RECOVERY_TOL_FRACTION * amplitude
            recovery = []
            for t in traces:
                settled = convergence_step(t, tol=tol, hold=200, start=switch)
                recovery.append(np.inf if settled is None else settled - switch)
            reduced["recovery"] = np.asarray(recovery, dtype=float)
        out[arm.label] = reduced
    return out


@pytest.fixture(scope="module")
def step_comparison():
    return reduce_experiment("step-comparison")


@pytest.fixture(scope="module")
def tracking_comparison():
    return reduce_experiment("tracking-comparison", n_seeds=TRACKING_SEEDS)


@pytest.fixture(scope="module")
def disturbance():
    return reduce_experiment("disturbance")


@pytest.fixture(scope="module")
def rand_rls():
    return reduce_experiment("rand-rls", n_seeds=SENSITIVITY_SEEDS)


@pytest.fixture(scope="module")
def rand_pd():
    return reduce_experiment("rand-pd")


@pytest.fixture(scope="module")
def rand_rls_esn():
    return reduce_experiment("rand-rls-esn", n_seeds=SENSITIVITY_SEEDS)


@pytest.fixture(scope="module")
def dist_step():
    return reduce_experiment("tesn-dist-step")


@pytest.fixture(scope="module")
def dist_complex():
    return reduce_experiment("tesn-dist-complex")


def test_criterion_01_rls_recursion_matches_ridge_oracle():
    rng = Rng(2024)
    worst = 0.0
    for trial in range(10):
        r = 2 + trial % 4  # dimensions 2..5
        alpha = float(10.0 ** rng.uniform(-1.0, 1.0))
        xs = rng.normal_array(0.0, 1.0, 50 * r).reshape(50, r)
        targets = rng.normal_array(0.0, 1.0, 50)
        state = rls_init(alpha, r, lam=1.0)
        w = np.zeros(r)
        for x, t in zip(xs, targets):
            w = rls_update(state, w, x, t).w_out
        direct = np.linalg.solve(xs.T @ xs + alpha * np.eye(r), xs.T @ targets)
        rel = float(np.linalg.norm(w - direct) / np.linalg.norm(direct))
        worst = max(worst, rel)
    assert worst < RLS_ORACLE_RTOL
    print(f"criterion 01 PASS: recursive vs ridge, worst relative gap {worst:.2e}")


def test_criterion_02_reservoir_scaling():
    radii, peaks = [], []
    for i in range(100):
        params, _, _ = init_esn(Rng.derive(777, i), EsnConfig())
        radii.append(spectral_radius(params.w_r))
        peaks.append(float(np.abs(params.w_in).max()))
    radii = np.asarray(radii)
    assert np.all(np.abs(radii - RADIUS_TARGET) < RADIUS_TOL)
    assert max(peaks) <= INPUT_WEIGHT_BOUND
    print(
        "criterion 02 PASS: 100 inits, |rho-0.8| max "
        f"{np.abs(radii - 0.8).max():.2e}, max|w_in| {max(peaks):.4f}"
    )


def test_criterion_03_step_task_ordering(step_comparison):
    mae = {label: arm["mae"].mean() for label, arm in step_comparison.items()}
    assert mae["esnfb"] < STEP_GOOD_MAE
    assert mae["fb"] < STEP_GOOD_MAE
    assert mae["esn"] > STEP_BAD_MAE
    spread = {label: arm["mae"].std() for label, arm in step_comparison.items()}
    assert spread["tesn"] >= TESN_STEP_STD_FACTOR * spread["esnfb"]
    print(
        "criterion 03 PASS: final-200 mean|err| esnfb "
        f"{mae['esnfb']:.4f}, fb {mae['fb']:.4f}, esn {mae['esn']:.3f}; "
        f"tesn/esnfb mae-std ratio {spread['tesn'] / spread['esnfb']:.0f}x"
    )


def test_criterion_04_tracking_task_ordering(tracking_comparison):
    per_seed = {label: arm["rmse"].mean() for label, arm in tracking_comparison.items()}
    assert per_seed["esnfb"] < per_seed["tesn"] < per_seed["fb"]
    mean_series = {
        label: arm["mean_err_tail_rms"] for label, arm in tracking_comparison.items()
    }
    assert mean_series["esnfb"] < mean_series["tesn"] < mean_series["fb"]
    ratio = mean_series["fb"] / mean_series["esnfb"]
    assert ratio >= TRACKING_FB_FACTOR
    print(
        "criterion 04 PASS: final-1000 rmse (per-seed) esnfb "
        f"{per_seed['esnfb']:.4f} < tesn {per_seed['tesn']:.4f} < fb "
        f"{per_seed['fb']:.4f}; mean-series fb/esnfb {ratio:.2f}x"
    )


def test_criterion_05_feedback_element_decays(step_comparison, tracking_comparison):
    ratios = {}
    for task, results in (("step", step_comparison), ("tracking", tracking_comparison)):
        arm = results["esnfb"]
        ratios[task] = arm["decay_residual"] / arm["decay_total"]
        assert ratios[task] < DECAY_FRACTION
    print(
        "criterion 05 PASS: |ubar-uf|/|ubar| over final 20%: step "
        f"{ratios['step']:.4f}, tracking {ratios['tracking']:.4f}"
    )


def test_criterion_06_disturbance_recovery(disturbance):
    esnfb = float(np.median(disturbance["esnfb"]["recovery"]))
    tesn = float(np.median(disturbance["tesn"]["recovery"]))
    assert esnfb <= RECOVERY_WITHIN
    assert tesn >= TESN_RECOVERY_FACTOR * esnfb
    print(
        "criterion 06 PASS: median post-switch recovery esnfb "
        f"{esnfb:.0f} steps, tesn {tesn:.0f} steps ({tesn / esnfb:.2f}x)"
    )


def test_criterion_07_hyperparameter_robustness(tracking_comparison, rand_rls, rand_pd):
    nominal = tracking_comparison["esnfb"]["rmse"].mean()
    randomized_rls = rand_rls["esnfb"]["rmse"].mean()
    randomized_pd = rand_pd["esnfb"]["rmse"].mean()
    assert randomized_rls <= ROBUSTNESS_FACTOR * nominal
    assert randomized_pd <= ROBUSTNESS_FACTOR * nominal
    print(
        "criterion 07 PASS: mean rmse nominal "
        f"{nominal:.4f}, randomized gains/readout-updates "
        f"{randomized_pd:.4f}/{randomized_rls:.4f} (both within 2x)"
    )


def test_criterion_08_sensitivity_contrast(rand_rls, rand_rls_esn):
    baseline = rand_rls["esnfb"]["rmse"].std()
    esn_spread = rand_rls_esn["esn"]["rmse"].std()
    tesn_spread = rand_rls_esn["tesn"]["rmse"].std()
    assert esn_spread >= SENSITIVITY_FACTOR * baseline
    assert tesn_spread >= SENSITIVITY_FACTOR * baseline
    print(
        "criterion 08 PASS: rmse std under randomized updates: esnfb "
        f"{baseline:.4f}, esn {esn_spread:.4f} ({esn_spread / baseline:.1f}x), "
        f"tesn {tesn_spread:.4f} ({tesn_spread / baseline:.1f}x)"
    )


def test_criterion_09_training_distribution_ordering(dist_step, dist_complex):
    step_median = {label: float(np.median(arm["rmse"])) for label, arm in dist_step.items()}
    assert step_median["tesn-near"] < step_median["tesn-base"] < step_median["tesn-far"]
    cx_median = {label: float(np.median(arm["rmse"])) for label, arm in dist_complex.items()}
    assert cx_median["tesn-near"] < cx_median["tesn-base"] < cx_median["tesn-far"]
    # the step-task medians sit close together because well-behaved seeds all
    # converge to the sensor-noise floor; the means separate the arms by the
    # weight of badly pre-trained seeds, so pin that ordering as well
    step_mean = {label: float(arm["rmse"].mean()) for label, arm in dist_step.items()}
    assert step_mean["tesn-near"] < step_mean["tesn-base"] < step_mean["tesn-far"]
    print(
        "criterion 09 PASS: median rmse step "
        f"{step_median['tesn-near']:.5f} < {step_median['tesn-base']:.5f} < "
        f"{step_median['tesn-far']:.5f}; complex "
        f"{cx_median['tesn-near']:.4f} < {cx_median['tesn-base']:.4f} < "
        f"{cx_median['tesn-far']:.4f}"
    )


def test_criterion_10_reruns_are_byte_identical(tmp_path):
    exp = get_experiment("step-comparison")
    first = run_experiment(exp, base_seed=BASE_SEED, out_dir=tmp_path / "a", n_seeds=5)
    second = run_experiment(exp, base_seed=BASE_SEED, out_dir=tmp_path / "b", n_seeds=5)
    assert first.n_seeds == second.n_seeds == 5
    compared = []
    for arm in exp.arms:
        a = (tmp_path / "a" / exp.name / f"{arm.label}.csv").read_bytes()
        b = (tmp_path / "b" / exp.name / f"{arm.label}.csv").read_bytes()
        assert a == b
        compared.append(len(a))
    print(
        "criterion 10 PASS: reruns byte-identical across "
        f"{len(compared)} CSVs ({sum(compared)} bytes)"
    )


def test_criterion_11_property_spot_checks():
    # saturation idempotence
    for u in (-3.0, -0.0, 0.0, 1e-12, 0.7, 1e9):
        assert saturate(saturate(u)) == saturate(u)
    # strict error reduction of one readout update
    rng = Rng(5)
    state = rls_init(1.0, 8, lam=0.99)
    w = rng.normal_array(0.0, 1.0, 8)
    x = rng.normal_array(0.0, 1.0, 8)
    out = rls_update(state, w, x, 2.0)
    assert abs(float(out.w_out @ x) - 2.0) < abs(out.e_esn)
    # P symmetry after a burst of updates
    for _ in range(100):
        w = rls_update(state, w, rng.normal_array(0.0, 1.0, 8), rng.normal(0, 1)).w_out
    assert np.linalg.norm(state.p - state.p.T) <= 1e-9 * np.linalg.norm(state.p)
    # plant rest fixed point
    resting = plant_step(PlantState(), 0.0)
    assert resting.y_curr == 0.0 and resting.y_prev == 0.0
    # future-window identity
    sig = ComplexSignal()
    window = future_window(sig, 123, 5)
    assert all(window[i] == reference_at(sig, 124 + i) for i in range(5))
    # aggregation permutation invariance
    traces = [make_trace(30, y=Rng(i).normal_array(0.0, 1.0, 30)) for i in range(5)]
    fwd, rev = aggregate(traces), aggregate(traces[::-1])
    assert np.allclose(fwd.mean["y"], rev.mean["y"], rtol=1e-12)
    assert np.allclose(fwd.std["y"], rev.std["y"], rtol=1e-12)
    print(
        "criterion 11 PASS: saturation idempotence, error reduction, P symmetry, "
        "plant fixed point, window identity, aggregation permutation invariance"
    )


def test_step_sanity_single_episode():
    """Cheap leading indicator: one combined-method episode tracks the step."""
    trace = run_episode(get_experiment("step-comparison").arms[0].config)
    assert np.mean(np.abs(trace.e_tilde[-200:])) < STEP_GOOD_MAE
    print("sanity PASS: single esnfb step episode within tolerance")
