from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from src.utils.errors import DataError
from .ace_series import AceSeries


def jarque_bera(values: Sequence[float]) -> float:
    """
    Jarque-Bera statistic n/6 * (S^2 + (K-3)^2 / 4) with the biased (moment) estimators of
    skewness S and kurtosis K.
    """
    x = np.asarray(values, dtype=float)
    if x.size < 4:
        raise DataError(f"Jarque-Bera needs at least 4 samples, got {x.size}")
    if np.var(x) == 0.0:
        raise DataError("degenerate sample")
    s = stats.skew(x, bias=True)
    k = stats.kurtosis(x, fisher=False, bias=True)
    return float(x.size / 6.0 * (s ** 2 + (k - 3.0) ** 2 / 4.0))


@dataclass(frozen=True)
class AceSummary:
    n: int
    mean_mw: float
    std_mw: float
    skewness: float
    kurtosis: float
    jarque_bera: float

    def __str__(self):
        return (f"n={self.n} mean={self.mean_mw:.3f} MW std={self.std_mw:.3f} MW "
                f"skew={self.skewness:.3f} kurt={self.kurtosis:.3f} JB={self.jarque_bera:.1f}")


def describe_ace(series: AceSeries) -> AceSummary:
    x = series.values
    if x.size < 4 or np.var(x) == 0.0:
        return AceSummary(x.size, float(np.mean(x)), float(np.std(x)), 0.0, 3.0, 0.0)
    return AceSummary(n=x.size,
                      mean_mw=float(np.mean(x)),
                      std_mw=float(np.std(x)),
                      skewness=float(stats.skew(x, bias=True)),
                      kurtosis=float(stats.kurtosis(x, fisher=False, bias=True)),
                      jarque_bera=jarque_bera(x))
