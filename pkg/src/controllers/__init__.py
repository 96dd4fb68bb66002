from .antiwindup import antiwindup_update, integrate_ace
from .lqr import (REFERENCE_GAIN, LqrModel, assemble_state, build_state_matrices, care_residual,
                  default_state_weights, lqr_step, solve_care, synthesize_lqr)
from .pjm import pjm_step, rega_path
from .recharge import pi_step, proposed_step, recharge_step
from .state import Command, ControllerConfig, ControllerState, PiGains, UnitFeedback
