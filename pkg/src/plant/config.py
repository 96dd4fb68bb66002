from dataclasses import dataclass, field
from typing import Optional

from src.utils import require_positive
from .bes import BesParams
from .generator import GeneratorParams


@dataclass(frozen=True)
class PlantConfig:
    """Regulating units of one balancing area: the aggregated generators and the aggregated storage."""
    generator: GeneratorParams = field(default_factory=GeneratorParams)
    bes: BesParams = field(default_factory=BesParams)
    dt_s: float = 2.0
    soc0_mwh: Optional[float] = None  # default: the storage reference
    bes_units: int = 1

    def __post_init__(self):
        require_positive('dt_s', self.dt_s)
        if self.soc0_mwh is None:
            object.__setattr__(self, 'soc0_mwh', self.bes.soc_ref_mwh)
        if not 0.0 <= self.soc0_mwh <= self.bes.energy_mwh:
            raise ValueError(f"soc0_mwh must lie in [0, {self.bes.energy_mwh}], got {self.soc0_mwh}")
        if self.bes_units < 1:
            raise ValueError("bes_units must be >= 1")

    @property
    def soc_ref_mwh(self) -> float:
        return self.bes.soc_ref_mwh
