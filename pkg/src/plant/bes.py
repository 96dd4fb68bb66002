"""
Aggregated battery energy storage. Sign convention: positive power is discharge (injection).
"""
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.utils import ArrayLike, require_finite, require_positive, unwrap

SECONDS_PER_HOUR = 3600.0


@dataclass(frozen=True)
class BesParams:
    power_mw: float = 200.0
    energy_mwh: float = 50.0
    eta_charge: float = math.sqrt(0.85)
    eta_discharge: float = math.sqrt(0.85)
    soc_ref_mwh: Optional[float] = None  # default: half full

    def __post_init__(self):
        if self.soc_ref_mwh is None:
            object.__setattr__(self, 'soc_ref_mwh', 0.5 * self.energy_mwh)
        require_positive('power_mw', self.power_mw)
        require_positive('energy_mwh', self.energy_mwh)
        for name in ('eta_charge', 'eta_discharge'):
            eta = getattr(self, name)
            if not 0.0 < eta <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {eta}")
        if not 0.0 <= self.soc_ref_mwh <= self.energy_mwh:
            raise ValueError(f"soc_ref_mwh must lie in [0, {self.energy_mwh}], got {self.soc_ref_mwh}")

    @classmethod
    def from_rating(cls, power_mw: float, duration_min: float, rte: float = 0.85) -> 'BesParams':
        """Storage rated `power_mw` for `duration_min` minutes; the round-trip efficiency is split evenly."""
        eta = math.sqrt(rte)
        return cls(power_mw=power_mw, energy_mwh=power_mw * duration_min / 60.0,
                   eta_charge=eta, eta_discharge=eta)

    @property
    def round_trip_efficiency(self) -> float:
        return self.eta_charge * self.eta_discharge

    def split(self, n_units: int) -> List['BesParams']:
        """n identical units whose aggregate equals this storage."""
        if n_units < 1:
            raise ValueError("n_units must be >= 1")
        return [replace(self, power_mw=self.power_mw / n_units, energy_mwh=self.energy_mwh / n_units,
                        soc_ref_mwh=self.soc_ref_mwh / n_units)] * n_units


@dataclass(frozen=True)
class BesState:
    soc_mwh: ArrayLike = 0.0
    p_e_mw: ArrayLike = 0.0


def bes_step(state: BesState, params: BesParams, cmd_mw: ArrayLike, dt_s: float) -> Tuple[BesState, ArrayLike]:
    require_positive('dt_s', dt_s)
    require_finite('RegD command', cmd_mw)
    soc = state.soc_mwh
    p = np.clip(cmd_mw, -params.power_mw, params.power_mw)
    # limit the power so the step can neither overdraw nor overfill the storage
    max_discharge = soc * params.eta_discharge * SECONDS_PER_HOUR / dt_s
    max_charge = (params.energy_mwh - soc) * SECONDS_PER_HOUR / (dt_s * params.eta_charge)
    p = np.where(p > 0.0, np.minimum(p, max_discharge), np.maximum(p, -max_charge))
    soc_next = np.where(p > 0.0,
                        soc - p * dt_s / (SECONDS_PER_HOUR * params.eta_discharge),
                        soc - p * dt_s * params.eta_charge / SECONDS_PER_HOUR)
    soc_next = unwrap(np.clip(soc_next, 0.0, params.energy_mwh))
    p = unwrap(p)
    return BesState(soc_next, p), p


def bes_fleet_step(states: Sequence[BesState], units: Sequence[BesParams], cmd_mw: float,
                   dt_s: float) -> Tuple[List[BesState], float]:
    """Dispatch one command over several units pro rata to their power rating; returns the summed output."""
    total_power = sum(u.power_mw for u in units)
    next_states, p_total = [], 0.0
    for state, unit in zip(states, units):
        state, p = bes_step(state, unit, cmd_mw * unit.power_mw / total_power, dt_s)
        next_states.append(state)
        p_total += p
    return next_states, p_total
