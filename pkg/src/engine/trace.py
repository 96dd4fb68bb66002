from dataclasses import dataclass, fields
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from src.utils.io import write_csv

TRACE_COLUMNS = ['t_s', 'ace_uncorrected_mw', 'p_ace_mw', 'rega_mw', 'regd_mw', 'pg_mw', 'pe_mw', 'soc_mwh',
                 'i_ace_mws']


@dataclass(frozen=True, eq=False)
class SimTrace:
    """
    Per-step record of one closed-loop run. Row t holds the corrected ACE measured at the start of
    step t, the commands issued from it, and the unit outputs and SoC at the end of the step.
    """
    t_s: np.ndarray
    ace_uncorrected_mw: np.ndarray
    p_ace_mw: np.ndarray
    rega_mw: np.ndarray
    regd_mw: np.ndarray
    p_g_mw: np.ndarray
    p_e_mw: np.ndarray
    soc_mwh: np.ndarray
    i_ace_mws: np.ndarray

    def __post_init__(self):
        lengths = {len(getattr(self, f.name)) for f in fields(self)}
        if len(lengths) != 1:
            raise ValueError("all trace columns must have the same length")

    def __len__(self) -> int:
        return len(self.t_s)

    def to_frame(self) -> pd.DataFrame:
        columns = [getattr(self, f.name) for f in fields(self)]
        return pd.DataFrame(dict(zip(TRACE_COLUMNS, columns)), columns=TRACE_COLUMNS)


def save_trace_csv(trace: SimTrace, path: Union[str, Path]) -> None:
    write_csv(trace.to_frame(), path)
