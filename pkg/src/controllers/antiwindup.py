from src.utils import ArrayLike
from .state import ControllerConfig, ControllerState, UnitFeedback


def antiwindup_update(i_ace_mws: ArrayLike, p_ace_mw: ArrayLike, rega_mw: ArrayLike, p_g_mw: ArrayLike,
                      regd_mw: ArrayLike, p_e_mw: ArrayLike, dt_s: float) -> ArrayLike:
    """ACE integrator that also integrates the mismatch between commanded and delivered unit power."""
    if dt_s <= 0:
        raise ValueError(f"dt_s must be positive, got {dt_s}")
    return i_ace_mws + (p_ace_mw + (rega_mw - p_g_mw) + (regd_mw - p_e_mw)) * dt_s


def integrate_ace(state: ControllerState, feedback: UnitFeedback, cfg: ControllerConfig, dt_s: float) -> ArrayLike:
    """
    I_ACE including the previous step. The outputs in `feedback` were produced by the commands
    stored in `state`, so each command is compared with its own response.
    """
    if cfg.antiwindup_enabled:
        return antiwindup_update(state.i_ace_mws, state.p_ace_prev_mw, state.rega_cmd_mw, feedback.p_g_mw,
                                 state.regd_cmd_mw, feedback.p_e_mw, dt_s)
    return state.i_ace_mws + state.p_ace_prev_mw * dt_s
