"""
RegD laws built from a separate PI controller plus an optional SoC recharge term.

Orientation of the recharge term: positive RegD discharges the storage, so a storage above its
reference is pushed down by adding +gain * (soc - soc_ref) to the RegD command.
"""
from typing import Protocol, Tuple

from src.utils import ArrayLike, require_finite, require_positive, unwrap
from src.utils.blocks import saturate
from .antiwindup import integrate_ace
from .pjm import rega_path
from .state import Command, ControllerConfig, ControllerState, UnitFeedback


class SocGainPolicy(Protocol):
    def gain(self, soc_mwh: ArrayLike) -> ArrayLike:
        ...


def recharge_step(state: ControllerState, p_ace_mw: ArrayLike, feedback: UnitFeedback, soc_gain: ArrayLike,
                  cfg: ControllerConfig, dt_s: float) -> Tuple[ControllerState, Command]:
    require_positive('dt_s', dt_s)
    require_finite('P_ACE', p_ace_mw)
    i_ace = integrate_ace(state, feedback, cfg, dt_s)
    _, rega_filter, rega = rega_path(state, p_ace_mw, i_ace, cfg, dt_s)
    gains = cfg.regd_gains
    regd = -gains.kp * p_ace_mw - gains.ki * i_ace + soc_gain * (feedback.soc_mwh - cfg.soc_ref_mwh)
    regd = saturate(regd, cfg.cd_mw)

    next_state = ControllerState(
        i_ace_mws=unwrap(i_ace),
        rega_filter_mw=unwrap(rega_filter),
        regd_filter_mw=state.regd_filter_mw,
        regd_energy_mws=unwrap(state.regd_energy_mws + regd * dt_s),
        p_ace_prev_mw=unwrap(p_ace_mw),
        rega_cmd_mw=unwrap(rega),
        regd_cmd_mw=unwrap(regd))
    return next_state, Command(unwrap(rega), unwrap(regd))


def proposed_step(state: ControllerState, p_ace_mw: ArrayLike, feedback: UnitFeedback, policy: SocGainPolicy,
                  cfg: ControllerConfig, dt_s: float) -> Tuple[ControllerState, Command]:
    return recharge_step(state, p_ace_mw, feedback, policy.gain(feedback.soc_mwh), cfg, dt_s)


def pi_step(state: ControllerState, p_ace_mw: ArrayLike, feedback: UnitFeedback, cfg: ControllerConfig,
            dt_s: float) -> Tuple[ControllerState, Command]:
    return recharge_step(state, p_ace_mw, feedback, 0.0, cfg, dt_s)
