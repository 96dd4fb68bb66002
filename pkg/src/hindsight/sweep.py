import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.controllers import ControllerConfig
from src.plant import PlantConfig
from src.signals.ace_series import AceSeries
from src.utils.errors import DataError
from .window import TrainSample, WindowProblem, solve_window_batch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SocSamplingPlan:
    """
    Stratified initial-SoC draws. [0, E] is cut into `n_strata` equal strata; the j-th draw of the
    s-th window start lands in stratum (s * draws_per_start + j) mod n_strata at a uniform position,
    so the strata are visited in rotation and covered evenly over the sweep.
    """
    n_strata: int = 500
    draws_per_start: int = 50

    def __post_init__(self):
        if self.n_strata < 1 or self.draws_per_start < 1:
            raise ValueError("n_strata and draws_per_start must be >= 1")

    def draw(self, energy_mwh: float, start_index: int, seed: int) -> np.ndarray:
        rng = np.random.default_rng([seed, start_index])
        strata = (start_index * self.draws_per_start + np.arange(self.draws_per_start)) % self.n_strata
        return (strata + rng.random(self.draws_per_start)) * (energy_mwh / self.n_strata)


@dataclass(frozen=True)
class SweepConfig:
    window_steps: int
    plant: PlantConfig
    controller: ControllerConfig
    w_e: float = 60.0
    stride_steps: Optional[int] = None  # default: half a window
    plan: SocSamplingPlan = field(default_factory=SocSamplingPlan)
    k_bounds: Optional[Tuple[float, float]] = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.window_steps < 1:
            raise ValueError("window_steps must be >= 1")
        if self.stride_steps is None:
            object.__setattr__(self, 'stride_steps', max(1, self.window_steps // 2))
        if self.stride_steps < 1:
            raise ValueError("stride_steps must be >= 1")

    def window_starts(self, n_samples: int) -> range:
        if n_samples < self.window_steps:
            raise DataError(f"data shorter than one window ({n_samples} < {self.window_steps} samples)")
        return range(0, n_samples - self.window_steps + 1, self.stride_steps)


def _solve_start(task: Tuple[int, int, AceSeries, SweepConfig]) -> List[TrainSample]:
    start_index, t0, window, cfg = task
    e0 = cfg.plan.draw(cfg.plant.bes.energy_mwh, start_index, cfg.seed)
    problem = WindowProblem(ace_window=window, e0_mwh=float(e0[0]), plant=cfg.plant,
                            controller=cfg.controller, w_e=cfg.w_e, k_bounds=cfg.k_bounds, t0=t0)
    k, j = solve_window_batch(problem, e0)
    logger.debug(f"window t0={t0}: mean K_e {np.mean(k):.4f} over {len(e0)} initial SoCs")
    return [TrainSample(t0=t0, e0_mwh=float(e), k_e=float(ki), j=float(ji)) for e, ki, ji in zip(e0, k, j)]


def sweep(ace: AceSeries, cfg: SweepConfig) -> List[TrainSample]:
    """Solve the hindsight problem for every window start and every initial SoC of the plan."""
    starts = cfg.window_starts(len(ace))
    tasks = [(i, t0, ace.window(t0, cfg.window_steps), cfg) for i, t0 in enumerate(starts)]
    logger.info(f"hindsight sweep: {len(tasks)} windows x {cfg.plan.draws_per_start} initial SoCs, "
                f"{cfg.workers} worker(s)")
    if cfg.workers <= 1:
        results = [_solve_start(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            results = list(executor.map(_solve_start, tasks))
    return [sample for batch in results for sample in batch]
