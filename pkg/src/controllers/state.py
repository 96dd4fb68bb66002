from dataclasses import dataclass, field

from src.utils import ArrayLike


@dataclass(frozen=True)
class PiGains:
    kp: float
    ki: float  # 1/s

    def __post_init__(self):
        if self.ki < 0:
            raise ValueError(f"ki must be >= 0, got {self.ki}")


@dataclass(frozen=True)
class ControllerConfig:
    """
    Settings shared by all AGC designs. `rega_gains` drive the conventional (RegA) path of every
    controller and the whole AGC signal of the PJM design; `regd_gains` are the separate RegD PI gains
    of the proposed and plain-PI designs.
    """
    rega_gains: PiGains = field(default_factory=lambda: PiGains(kp=0.0, ki=0.4))
    regd_gains: PiGains = field(default_factory=lambda: PiGains(kp=1.0, ki=0.8))
    ta_s: float = 60.0
    td_s: float = 10.0
    ca_mw: float = 400.0
    cd_mw: float = 200.0
    neutrality_gain: float = 2.0  # 1/h on the accumulated RegD energy
    neutrality_enabled: bool = True
    antiwindup_enabled: bool = True
    soc_ref_mwh: float = 25.0


@dataclass(frozen=True)
class ControllerState:
    i_ace_mws: ArrayLike = 0.0
    rega_filter_mw: ArrayLike = 0.0
    regd_filter_mw: ArrayLike = 0.0
    regd_energy_mws: ArrayLike = 0.0
    # previous step, folded into I_ACE once the unit outputs it produced are measured
    p_ace_prev_mw: ArrayLike = 0.0
    rega_cmd_mw: ArrayLike = 0.0
    regd_cmd_mw: ArrayLike = 0.0


@dataclass(frozen=True)
class UnitFeedback:
    """Measured unit outputs fed back to the AGC."""
    p_g_mw: ArrayLike = 0.0
    p_e_mw: ArrayLike = 0.0
    soc_mwh: ArrayLike = 0.0


@dataclass(frozen=True)
class Command:
    rega_mw: ArrayLike
    regd_mw: ArrayLike
