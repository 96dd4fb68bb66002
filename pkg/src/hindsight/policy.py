"""
The trained recharge policy: a piecewise-constant SoC feedback gain over [0, E].
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.utils import ArrayLike, unwrap
from src.utils.errors import DataError
from src.utils.io import write_csv

POLICY_COLUMNS = ['bin_index', 'e_lo_mwh', 'e_hi_mwh', 'gain_mw_per_mwh', 'sample_count']


@dataclass(frozen=True, eq=False)
class SocPolicyTable:
    energy_mwh: float
    edges: np.ndarray
    gains: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        gains = np.asarray(self.gains, dtype=float)
        counts = np.asarray(self.counts, dtype=np.int64)
        for arr in (edges, gains, counts):
            arr.setflags(write=False)
        object.__setattr__(self, 'edges', edges)
        object.__setattr__(self, 'gains', gains)
        object.__setattr__(self, 'counts', counts)
        if len(gains) < 1 or len(edges) != len(gains) + 1 or len(counts) != len(gains):
            raise ValueError("a policy needs n_bins >= 1 gains and counts and n_bins + 1 edges")
        if edges[0] != 0.0 or edges[-1] != self.energy_mwh or np.any(np.diff(edges) <= 0):
            raise ValueError("edges must increase strictly from 0 to energy_mwh")
        if not np.all(np.isfinite(gains)):
            raise ValueError("gains must be finite")
        if np.any(counts < 0):
            raise ValueError("counts must be >= 0")

    @property
    def n_bins(self) -> int:
        return len(self.gains)

    @classmethod
    def uniform(cls, energy_mwh: float, gain: float, n_bins: int = 1) -> 'SocPolicyTable':
        return cls(energy_mwh, np.linspace(0.0, energy_mwh, n_bins + 1), np.full(n_bins, float(gain)),
                   np.zeros(n_bins, dtype=np.int64))

    def bin_index(self, soc_mwh: ArrayLike) -> np.ndarray:
        """Bins are [e_lo, e_hi); soc == E belongs to the last bin."""
        idx = np.searchsorted(self.edges, soc_mwh, side='right') - 1
        return np.clip(idx, 0, self.n_bins - 1)

    def gain(self, soc_mwh: ArrayLike) -> ArrayLike:
        return eval_policy(self, soc_mwh)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'bin_index': np.arange(self.n_bins),
                             'e_lo_mwh': self.edges[:-1],
                             'e_hi_mwh': self.edges[1:],
                             'gain_mw_per_mwh': self.gains,
                             'sample_count': self.counts}, columns=POLICY_COLUMNS)


def eval_policy(table: SocPolicyTable, soc_mwh: ArrayLike) -> ArrayLike:
    soc = np.asarray(soc_mwh, dtype=float)
    if np.any(soc < 0.0) or np.any(soc > table.energy_mwh) or not np.all(np.isfinite(soc)):
        raise ValueError(f"soc must lie in [0, {table.energy_mwh}] MWh, got {soc_mwh!r}")
    return unwrap(table.gains[table.bin_index(soc)])


def _fill_empty_bins(gains: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Empty bins take the gain of the nearest populated bin; equidistant ties go to the lower SoC."""
    filled = np.flatnonzero(counts > 0)
    idx = np.arange(len(gains))
    pos = np.searchsorted(filled, idx)
    left = filled[np.clip(pos - 1, 0, len(filled) - 1)]
    right = filled[np.clip(pos, 0, len(filled) - 1)]
    use_left = (pos > 0) & ((pos == len(filled)) | (idx - left <= right - idx))
    nearest = np.where(use_left, left, right)
    return np.where(counts > 0, gains, gains[nearest])


def build_table(samples: Sequence, energy_mwh: float, n_bins: int = 500) -> SocPolicyTable:
    """Average the recorded gains per initial-SoC bin."""
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    if len(samples) == 0:
        raise DataError("cannot build a policy table from zero samples")
    edges = np.linspace(0.0, energy_mwh, n_bins + 1)
    e0 = np.array([s.e0_mwh for s in samples], dtype=float)
    k = np.array([s.k_e for s in samples], dtype=float)
    idx = np.clip(np.searchsorted(edges, e0, side='right') - 1, 0, n_bins - 1)
    # canonical summation order makes the means independent of the sample order
    order = np.lexsort((k, idx))
    sums = np.bincount(idx[order], weights=k[order], minlength=n_bins)
    counts = np.bincount(idx, minlength=n_bins)
    gains = np.zeros(n_bins)
    populated = counts > 0
    gains[populated] = sums[populated] / counts[populated]
    return SocPolicyTable(energy_mwh, edges, _fill_empty_bins(gains, counts), counts)


def gain_profile(table: SocPolicyTable, n_groups: int = 10) -> List[Tuple[float, float, float]]:
    """Mean gain over `n_groups` equal SoC ranges, as (e_lo, e_hi, mean gain) rows."""
    rows = []
    for group in np.array_split(np.arange(table.n_bins), n_groups):
        if len(group) == 0:
            continue
        rows.append((float(table.edges[group[0]]), float(table.edges[group[-1] + 1]),
                     float(np.mean(table.gains[group]))))
    return rows


def mean_gain_near(table: SocPolicyTable, soc_mwh: float, n_nearest: int = 10) -> float:
    """Mean gain of the `n_nearest` bins whose centers lie closest to `soc_mwh`."""
    centers = 0.5 * (table.edges[:-1] + table.edges[1:])
    nearest = np.argsort(np.abs(centers - soc_mwh), kind='stable')[:n_nearest]
    return float(np.mean(table.gains[nearest]))


@dataclass(frozen=True)
class PolicyShape:
    near_ref: float
    near_full: float  # around 0.9 E
    near_empty: float  # bins at or below 0.1 E
    low: float  # around 0.3 E

    @property
    def rises_towards_full(self) -> bool:
        return self.near_ref <= self.near_full

    @property
    def depressed_near_empty(self) -> bool:
        return self.near_empty < self.low

    def __str__(self):
        return (f"gain near reference {self.near_ref:.4f}, near 0.9E {self.near_full:.4f}, "
                f"near 0.3E {self.low:.4f}, at or below 0.1E {self.near_empty:.4f} MW/MWh; "
                f"rises towards full: {self.rises_towards_full}, depressed near empty: {self.depressed_near_empty}")


def policy_shape(table: SocPolicyTable, soc_ref_mwh: float, n_nearest: int = 10) -> PolicyShape:
    energy = table.energy_mwh
    centers = 0.5 * (table.edges[:-1] + table.edges[1:])
    empty = centers <= 0.1 * energy
    near_empty = float(np.mean(table.gains[empty])) if np.any(empty) else float(table.gains[0])
    return PolicyShape(near_ref=mean_gain_near(table, soc_ref_mwh, n_nearest),
                       near_full=mean_gain_near(table, 0.9 * energy, n_nearest),
                       near_empty=near_empty,
                       low=mean_gain_near(table, 0.3 * energy, n_nearest))


def save_policy_csv(table: SocPolicyTable, path: Union[str, Path]) -> None:
    write_csv(table.to_frame(), path)
