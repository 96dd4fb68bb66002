from dataclasses import dataclass

import numpy as np

from src.utils.errors import DataError
from .trace import SimTrace


@dataclass(frozen=True)
class Metrics:
    mean_sq_pace_mw2: float
    mean_sq_soc_dev_mwh2: float

    def __str__(self):
        return f"{self.mean_sq_pace_mw2:g},{self.mean_sq_soc_dev_mwh2:g}"


def compute_metrics(trace: SimTrace, soc_ref_mwh: float) -> Metrics:
    """Mean square of the corrected ACE and of the SoC deviation from its reference."""
    if len(trace) == 0:
        raise DataError("cannot compute metrics of an empty trace")
    dev = trace.soc_mwh - soc_ref_mwh
    return Metrics(mean_sq_pace_mw2=float(np.mean(trace.p_ace_mw ** 2)),
                   mean_sq_soc_dev_mwh2=float(np.mean(dev ** 2)))
