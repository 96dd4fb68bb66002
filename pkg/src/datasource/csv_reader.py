import logging
from pathlib import Path
from typing import Union

import numpy as np

from src.hindsight.policy import POLICY_COLUMNS, SocPolicyTable
from src.signals.ace_series import ACE_COLUMNS, AceSeries
from src.utils.errors import DataError
from src.utils.io import read_csv_frame, to_numeric_column
from .datasource_base import DataSourceBase

logger = logging.getLogger(__name__)

SPACING_TOLERANCE = 1e-6
DEFAULT_DT_S = 2.0


class AceCsvReader(DataSourceBase):
    """Reads `t_s,ace_mw` files; the timestep is inferred from the first gap."""

    def load(self, path: Union[str, Path]) -> AceSeries:
        df = read_csv_frame(path, ACE_COLUMNS)
        t = to_numeric_column(df, 't_s', path).to_numpy()
        values = to_numeric_column(df, 'ace_mw', path).to_numpy()
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(values)):
            row = int(np.argmax(~(np.isfinite(t) & np.isfinite(values)))) + 1
            raise DataError(f"{path}: non-finite value at row {row}")
        if len(t) == 1:
            dt = DEFAULT_DT_S
        else:
            dt = t[1] - t[0]
            if dt <= 0:
                raise DataError(f"{path}: timestamps must increase strictly (row 2)")
            gaps = np.diff(t)
            bad = np.abs(gaps - dt) > SPACING_TOLERANCE * dt
            if bad.any():
                raise DataError(f"{path}: non-uniform spacing at row {int(np.argmax(bad)) + 2}")
        logger.info(f"loaded {len(values)} ACE samples from {path} (dt={dt:g} s)")
        return AceSeries(values, float(dt), float(t[0]))


class PolicyCsvReader(DataSourceBase):
    """Reads a trained policy table written by `save_policy_csv`."""

    def load(self, path: Union[str, Path]) -> SocPolicyTable:
        df = read_csv_frame(path, POLICY_COLUMNS)
        columns = {c: to_numeric_column(df, c, path).to_numpy() for c in POLICY_COLUMNS}
        if not np.array_equal(columns['bin_index'], np.arange(len(df))):
            raise DataError(f"{path}: bin_index must run 0..{len(df) - 1} in order")
        lo, hi = columns['e_lo_mwh'], columns['e_hi_mwh']
        if np.any(lo[1:] != hi[:-1]):
            raise DataError(f"{path}: bins are not contiguous")
        edges = np.append(lo, hi[-1])
        try:
            return SocPolicyTable(float(hi[-1]), edges, columns['gain_mw_per_mwh'],
                                  columns['sample_count'].astype(np.int64))
        except ValueError as e:
            raise DataError(f"{path}: {e}")
