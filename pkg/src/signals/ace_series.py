from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from src.utils import require_positive
from src.utils.io import write_csv

ACE_COLUMNS = ['t_s', 'ace_mw']


@dataclass(frozen=True, eq=False)
class AceSeries:
    """
    A uniformly sampled area-control-error signal in MW. `start_time_s` is bookkeeping only,
    every computation works on sample indices.
    """
    values: np.ndarray
    dt_s: float = 2.0
    start_time_s: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        require_positive('dt_s', self.dt_s)
        if len(values) == 0:
            raise ValueError("an ACE series needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise ValueError("ACE values must be finite")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def duration_s(self) -> float:
        return len(self) * self.dt_s

    def times(self) -> np.ndarray:
        return self.start_time_s + np.arange(len(self)) * self.dt_s

    def window(self, start: int, length: int) -> 'AceSeries':
        if start < 0 or start + length > len(self):
            raise IndexError(f"window [{start}, {start + length}) outside series of length {len(self)}")
        return AceSeries(self.values[start:start + length], self.dt_s, self.start_time_s + start * self.dt_s)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'t_s': self.times(), 'ace_mw': self.values}, columns=ACE_COLUMNS)


def save_ace_csv(series: AceSeries, path: Union[str, Path]) -> None:
    write_csv(series.to_frame(), path)
