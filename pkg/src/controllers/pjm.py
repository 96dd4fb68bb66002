"""
PJM conditional-neutrality AGC: one PI controller whose output is split into a low-passed RegA
signal and the residual RegD signal, with an optional feedback on the accumulated RegD energy.
"""
from typing import Tuple

from src.utils import ArrayLike, require_finite, require_positive, unwrap
from src.utils.blocks import first_order_lag, saturate
from .antiwindup import integrate_ace
from .state import Command, ControllerConfig, ControllerState, UnitFeedback


def rega_path(state: ControllerState, p_ace_mw: ArrayLike, i_ace_mws: ArrayLike, cfg: ControllerConfig,
              dt_s: float) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
    """Pre-set PI + low-pass RegA path; returns (AGC signal, new filter state, limited RegA)."""
    gains = cfg.rega_gains
    p_agc = -gains.kp * p_ace_mw - gains.ki * i_ace_mws
    rega_filter = first_order_lag(state.rega_filter_mw, p_agc, dt_s, cfg.ta_s)
    return p_agc, rega_filter, saturate(rega_filter, cfg.ca_mw)


def pjm_step(state: ControllerState, p_ace_mw: ArrayLike, feedback: UnitFeedback, cfg: ControllerConfig,
             dt_s: float) -> Tuple[ControllerState, Command]:
    require_positive('dt_s', dt_s)
    require_finite('P_ACE', p_ace_mw)
    i_ace = integrate_ace(state, feedback, cfg, dt_s)
    p_agc, rega_filter, rega = rega_path(state, p_ace_mw, i_ace, cfg, dt_s)
    regd_filter = first_order_lag(state.regd_filter_mw, p_agc - rega, dt_s, cfg.td_s)
    regd = regd_filter
    if cfg.neutrality_enabled:
        regd = regd - cfg.neutrality_gain * state.regd_energy_mws / 3600.0
    regd = saturate(regd, cfg.cd_mw)

    next_state = ControllerState(
        i_ace_mws=unwrap(i_ace),
        rega_filter_mw=unwrap(rega_filter),
        regd_filter_mw=unwrap(regd_filter),
        regd_energy_mws=unwrap(state.regd_energy_mws + regd * dt_s),
        p_ace_prev_mw=unwrap(p_ace_mw),
        rega_cmd_mw=unwrap(rega),
        regd_cmd_mw=unwrap(regd))
    return next_state, Command(unwrap(rega), unwrap(regd))
