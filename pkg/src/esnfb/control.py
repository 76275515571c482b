"""Feedback P-D law, control-output composition rules, and input saturation.

All operations are pure scalar functions (plain floats, no numpy) since they
sit on the per-step hot path of the closed loop.
"""

import enum
from dataclasses import dataclass

from .errors import InvalidParameterError


class ControlMethod(enum.Enum):
    """The four controller configurations compared by the experiment suite."""

    ESN_FB = "esnfb"  # online-learning ESN feedforward + P-D feedback
    ESN = "esn"       # online-learning ESN alone
    TESN = "tesn"     # ESN with a pre-training phase, then online learning
    FB = "fb"         # P-D feedback alone

    @property
    def uses_esn(self) -> bool:
        return self is not ControlMethod.FB


@dataclass(frozen=True)
class PdGains:
    """Non-negative proportional and differential feedback gains."""

    k_p: float = 1e-3
    k_d: float = 1e-5

    def __post_init__(self):
        if self.k_p < 0 or self.k_d < 0:
            raise InvalidParameterError(f"P-D gains must be non-negative, got {self}")


def pd_output(gains: PdGains, e_tilde: float, y_tilde_prev: float, y_tilde_curr: float) -> float:
    """Feedback adjustment: proportional on the tracking error, differential
    on the backward difference of the measured output."""
    return gains.k_p * e_tilde + gains.k_d * (y_tilde_prev - y_tilde_curr)


def compose_output(
    method: ControlMethod,
    u_bar_prev: float,
    u_f_curr: float,
    u_f_prev: float,
    u_b_curr: float,
) -> float:
    """Combine feedforward and feedback contributions into the raw control output.

    ESN_FB accumulates the previous applied input, the feedforward increment,
    and the feedback adjustment; ESN/TESN emit the feedforward directly; FB
    accumulates only the feedback adjustment.
    """
    if method is ControlMethod.ESN_FB:
        return u_bar_prev + u_f_curr - u_f_prev + u_b_curr
    if method is ControlMethod.FB:
        return u_bar_prev + u_b_curr
    return u_f_curr


def saturate(u: float) -> float:
    """Half-wave saturation 0.5*u*(1+sign(u)): passes u > 0, clips the rest to 0.

    The +0.0 normalizes -0.0 so serialized traces never print a signed zero.
    """
    u = float(u)
    sign = (u > 0.0) - (u < 0.0)
    return 0.5 * u * (1.0 + sign) + 0.0
