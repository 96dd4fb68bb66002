"""
Offline analysis around the trained policy: exhaustive search of the SoC weight and the
rank correlation between the initial SoC deviation and the hindsight gain.
"""
import dataclasses
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import stats

from src.hindsight.policy import SocPolicyTable, build_table
from src.hindsight.sweep import SweepConfig, sweep
from src.signals.ace_series import AceSeries
from src.utils.errors import DataError
from .closed_loop import ControllerSpec, run_closed_loop
from .metrics import Metrics, compute_metrics

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightScore:
    w_e: float
    metrics: Metrics

    @property
    def score(self) -> float:
        # the ACE term is reported in thousands, the same scale as the comparison report
        return self.metrics.mean_sq_pace_mw2 / 1e3 + self.metrics.mean_sq_soc_dev_mwh2


def tune_weight(train_ace: AceSeries, eval_ace: AceSeries, candidates: Sequence[float], cfg: SweepConfig,
                n_bins: int = 500) -> Tuple[float, SocPolicyTable, List[WeightScore]]:
    """
    Train one policy per candidate weight, run it on the evaluation series and keep the
    lowest score. Ties go to the smaller weight.
    """
    if len(candidates) == 0:
        raise ValueError("tune_weight needs at least one candidate weight")
    plant = cfg.plant
    best = None
    scores = []
    for w_e in sorted(float(w) for w in candidates):
        table = build_table(sweep(train_ace, dataclasses.replace(cfg, w_e=w_e)), plant.bes.energy_mwh, n_bins)
        trace = run_closed_loop(eval_ace, ControllerSpec('proposed', cfg.controller, policy=table), plant)
        result = WeightScore(w_e, compute_metrics(trace, plant.bes.soc_ref_mwh))
        scores.append(result)
        logger.info(f"w_e={w_e:g}: score {result.score:.6g} ({result.metrics})")
        if best is None or result.score < best[0].score:
            best = (result, table)
    return best[0].w_e, best[1], scores


def gain_soc_correlation(samples: Sequence, soc_ref_mwh: float) -> float:
    """Spearman rank correlation between |e0 - e_ref| and the hindsight gain."""
    if len(samples) < 2:
        raise DataError("need at least two samples for a rank correlation")
    deviation = np.abs(np.array([s.e0_mwh for s in samples]) - soc_ref_mwh)
    gains = np.array([s.k_e for s in samples])
    if np.ptp(deviation) == 0.0 or np.ptp(gains) == 0.0:
        return float('nan')
    return float(stats.spearmanr(deviation, gains)[0])
