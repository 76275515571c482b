import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from esnfb.control import ControlMethod, PdGains, compose_output, pd_output, saturate
from esnfb.errors import InvalidParameterError

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e12, max_value=1e12)


def test_method_enum():
    assert [m.value for m in ControlMethod] == ["esnfb", "esn", "tesn", "fb"]
    assert ControlMethod("esnfb") is ControlMethod.ESN_FB
    assert ControlMethod.ESN_FB.uses_esn
    assert ControlMethod.ESN.uses_esn
    assert ControlMethod.TESN.uses_esn
    assert not ControlMethod.FB.uses_esn


def test_gains_defaults_and_validation():
    g = PdGains()
    assert g.k_p == 1e-3 and g.k_d == 1e-5
    PdGains(0.0, 0.0)
    with pytest.raises(InvalidParameterError):
        PdGains(k_p=-1e-9)
    with pytest.raises(InvalidParameterError):
        PdGains(k_d=-1e-9)


def test_pd_hand_value():
    # k_p*e + k_d*(prev - curr)
    assert pd_output(PdGains(2.0, 3.0), 0.5, 1.0, 4.0) == -8.0
    assert pd_output(PdGains(), 1.0, 0.0, 0.0) == 1e-3
    assert pd_output(PdGains(), 0.0, 0.0, 1.0) == -1e-5


@settings(max_examples=100, deadline=None)
@given(e=finite, prev=finite, curr=finite, c=st.floats(-100.0, 100.0))
def test_pd_linear_in_error(e, prev, curr, c):
    g = PdGains(0.5, 0.25)
    base = pd_output(g, e, prev, curr)
    offset = pd_output(g, 0.0, prev, curr)
    assert pd_output(g, c * e, prev, curr) == pytest.approx(
        c * (base - offset) + offset, rel=1e-9, abs=1e-6
    )


def test_pd_linear_in_difference():
    g = PdGains(0.0, 2.0)
    assert pd_output(g, 0.0, 5.0, 3.0) == 4.0
    assert pd_output(g, 0.0, 10.0, 6.0) == 8.0
    assert pd_output(g, 0.0, 0.0, 0.0) == 0.0


def test_compose_hand_values():
    args = dict(u_bar_prev=0.5, u_f_curr=0.2, u_f_prev=0.1, u_b_curr=0.01)
    assert compose_output(ControlMethod.ESN_FB, **args) == pytest.approx(0.61)
    assert compose_output(ControlMethod.ESN, **args) == 0.2
    assert compose_output(ControlMethod.TESN, **args) == 0.2
    assert compose_output(ControlMethod.FB, **args) == 0.51


@settings(max_examples=100, deadline=None)
@given(u_bar_prev=finite, u_f=finite, u_f_prev=finite, u_b=finite)
def test_esnfb_minus_fb_is_the_feedforward_delta(u_bar_prev, u_f, u_f_prev, u_b):
    combined = compose_output(ControlMethod.ESN_FB, u_bar_prev, u_f, u_f_prev, u_b)
    fb_only = compose_output(ControlMethod.FB, u_bar_prev, u_f, u_f_prev, u_b)
    assert combined - fb_only == pytest.approx(u_f - u_f_prev, rel=1e-9, abs=1e-3)


def test_saturate_basic():
    assert saturate(3.0) == 3.0
    assert saturate(-2.0) == 0.0
    assert saturate(0.0) == 0.0
    assert saturate(1e-300) == 1e-300
    assert saturate(math.inf) == math.inf


def test_saturate_normalizes_negative_zero():
    out = saturate(-0.0)
    assert out == 0.0 and math.copysign(1.0, out) == 1.0


def test_saturate_accepts_numpy_scalars():
    out = saturate(np.float64(-1.5))
    assert out == 0.0 and isinstance(out, float)
    assert saturate(np.float64(2.5)) == 2.5


@settings(max_examples=200, deadline=None)
@given(u=st.floats(allow_nan=False, min_value=-1e30, max_value=1e30))
def test_saturate_idempotent_and_nonnegative(u):
    once = saturate(u)
    assert once >= 0.0
    assert saturate(once) == once
    assert once == (u if u > 0 else 0.0)


@settings(max_examples=100, deadline=None)
@given(a=finite, b=finite)
def test_saturate_monotone(a, b):
    lo, hi = min(a, b), max(a, b)
    assert saturate(lo) <= saturate(hi)
