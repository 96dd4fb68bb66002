"""
Closed-loop AGC simulation: the uncorrected ACE plus the unit responses of the previous step
give the corrected ACE, the controller turns it into RegA/RegD, and the units respond.
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from src.controllers import (Command, ControllerConfig, ControllerState, LqrModel, UnitFeedback, assemble_state,
                             lqr_step, pi_step, pjm_step, proposed_step)
from src.hindsight.policy import SocPolicyTable
from src.plant import BesState, GeneratorState, PlantConfig, bes_fleet_step, bes_step, generator_step
from src.signals.ace_series import AceSeries
from src.utils.errors import ConfigError
from .trace import SimTrace

CONTROLLER_KINDS = ('pjm', 'lqr', 'proposed', 'pi')


@dataclass(frozen=True, eq=False)
class ControllerSpec:
    kind: str
    config: ControllerConfig
    policy: Optional[SocPolicyTable] = None
    lqr: Optional[LqrModel] = None

    def __post_init__(self):
        if self.kind not in CONTROLLER_KINDS:
            raise ConfigError(f"unknown controller '{self.kind}', expected one of {', '.join(CONTROLLER_KINDS)}")
        if self.kind == 'proposed' and self.policy is None:
            raise ConfigError("the proposed controller needs a trained policy")
        if self.kind == 'lqr' and self.lqr is None:
            raise ConfigError("the LQR controller needs a gain model")

    def step(self, state: ControllerState, p_ace_mw: float, feedback: UnitFeedback,
             dt_s: float) -> Tuple[ControllerState, Command]:
        if self.kind == 'pjm':
            return pjm_step(state, p_ace_mw, feedback, self.config, dt_s)
        if self.kind == 'proposed':
            return proposed_step(state, p_ace_mw, feedback, self.policy, self.config, dt_s)
        if self.kind == 'lqr':
            x = assemble_state(p_ace_mw, state, feedback, self.config, dt_s)
            return lqr_step(state, x, feedback, self.lqr, self.config, dt_s)
        return pi_step(state, p_ace_mw, feedback, self.config, dt_s)


@dataclass(frozen=True)
class InitialConditions:
    soc0_mwh: Optional[float] = None  # default: the plant's soc0
    generator: GeneratorState = field(default_factory=GeneratorState)
    controller: ControllerState = field(default_factory=ControllerState)
    p_e_mw: float = 0.0


def run_closed_loop(ace: AceSeries, controller: ControllerSpec, plant: PlantConfig,
                    init: Optional[InitialConditions] = None) -> SimTrace:
    if not math.isclose(ace.dt_s, plant.dt_s):
        raise ConfigError(f"ACE time step {ace.dt_s} s differs from plant time step {plant.dt_s} s")
    if not math.isclose(controller.config.soc_ref_mwh, plant.soc_ref_mwh):
        raise ConfigError(f"controller SoC reference {controller.config.soc_ref_mwh} MWh differs from the storage "
                          f"reference {plant.soc_ref_mwh} MWh")
    init = init or InitialConditions()
    soc0 = plant.soc0_mwh if init.soc0_mwh is None else init.soc0_mwh
    if not 0.0 <= soc0 <= plant.bes.energy_mwh:
        raise ConfigError(f"soc0 must lie in [0, {plant.bes.energy_mwh}] MWh, got {soc0}")
    dt = plant.dt_s

    units = plant.bes.split(plant.bes_units) if plant.bes_units > 1 else None
    unit_states = [BesState(soc0 / plant.bes_units, init.p_e_mw / plant.bes_units)] * plant.bes_units
    gen, bes, ctrl = init.generator, BesState(soc0, init.p_e_mw), init.controller

    n = len(ace)
    columns = {name: np.empty(n) for name in ('p_ace', 'rega', 'regd', 'p_g', 'p_e', 'soc', 'i_ace')}
    for t, ace_t in enumerate(ace.values):
        p_ace = ace_t + gen.p_g_mw + bes.p_e_mw
        feedback = UnitFeedback(gen.p_g_mw, bes.p_e_mw, bes.soc_mwh)
        ctrl, cmd = controller.step(ctrl, p_ace, feedback, dt)
        gen, p_g = generator_step(gen, plant.generator, cmd.rega_mw, dt)
        if units is None:
            bes, p_e = bes_step(bes, plant.bes, cmd.regd_mw, dt)
        else:
            unit_states, p_e = bes_fleet_step(unit_states, units, cmd.regd_mw, dt)
            # the unit sum can overshoot E by rounding
            soc = min(max(math.fsum(s.soc_mwh for s in unit_states), 0.0), plant.bes.energy_mwh)
            bes = BesState(soc, p_e)

        columns['p_ace'][t] = p_ace
        columns['rega'][t] = cmd.rega_mw
        columns['regd'][t] = cmd.regd_mw
        columns['p_g'][t] = p_g
        columns['p_e'][t] = p_e
        columns['soc'][t] = bes.soc_mwh
        columns['i_ace'][t] = ctrl.i_ace_mws

    return SimTrace(t_s=ace.times(), ace_uncorrected_mw=ace.values.copy(), p_ace_mw=columns['p_ace'],
                    rega_mw=columns['rega'], regd_mw=columns['regd'], p_g_mw=columns['p_g'],
                    p_e_mw=columns['p_e'], soc_mwh=columns['soc'], i_ace_mws=columns['i_ace'])
