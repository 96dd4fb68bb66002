"""
Conventional generator response: deadband -> governor lag 1/(T_g s + 1) -> ramp limit -> capacity.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.utils import ArrayLike, require_finite, require_positive, unwrap
from src.utils.blocks import deadband, first_order_lag, saturate


@dataclass(frozen=True)
class GeneratorParams:
    capacity_mw: float = 400.0
    deadband_mw: float = 5.0
    governor_tc_s: float = 20.0
    ramp_mw_per_s: Optional[float] = None  # default: 10 % of capacity per minute

    def __post_init__(self):
        if self.ramp_mw_per_s is None:
            object.__setattr__(self, 'ramp_mw_per_s', 0.1 * self.capacity_mw / 60.0)
        require_positive('capacity_mw', self.capacity_mw)
        require_positive('governor_tc_s', self.governor_tc_s)
        require_positive('ramp_mw_per_s', self.ramp_mw_per_s)
        if self.deadband_mw < 0:
            raise ValueError(f"deadband_mw must be >= 0, got {self.deadband_mw}")


@dataclass(frozen=True)
class GeneratorState:
    governor_out_mw: ArrayLike = 0.0
    p_g_mw: ArrayLike = 0.0


def generator_step(state: GeneratorState, params: GeneratorParams, cmd_mw: ArrayLike,
                   dt_s: float) -> Tuple[GeneratorState, ArrayLike]:
    require_positive('dt_s', dt_s)
    require_finite('RegA command', cmd_mw)
    cmd = deadband(cmd_mw, params.deadband_mw)
    governor = first_order_lag(state.governor_out_mw, cmd, dt_s, params.governor_tc_s)
    max_delta = params.ramp_mw_per_s * dt_s
    p_g = np.clip(governor, state.p_g_mw - max_delta, state.p_g_mw + max_delta)
    p_g = unwrap(saturate(p_g, params.capacity_mw))
    return GeneratorState(unwrap(governor), p_g), p_g
