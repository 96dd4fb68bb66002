"""
Best-hindsight problem over one ACE window: the SoC feedback gain K_e is the only decision
variable, so the program is solved by a coarse grid followed by golden-section refinement.
Many gains and initial SoCs are simulated at once as lanes of the same array-valued step code.
"""
import math
from dataclasses import dataclass, fields
from typing import Callable, Optional, Tuple

import numpy as np

from src.controllers import ControllerConfig, ControllerState, UnitFeedback, recharge_step
from src.plant import BesParams, BesState, GeneratorState, PlantConfig, bes_step, generator_step
from src.signals.ace_series import AceSeries

GRID_POINTS = 33
K_TOLERANCE = 1e-4
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0


def default_k_bounds(bes: BesParams) -> Tuple[float, float]:
    """Full recharge power is reachable at a 10 % SoC deviation."""
    return 0.0, 10.0 * bes.power_mw / bes.energy_mwh


@dataclass(frozen=True, eq=False)
class WindowProblem:
    ace_window: AceSeries
    e0_mwh: float
    plant: PlantConfig
    controller: ControllerConfig
    w_e: float
    k_bounds: Optional[Tuple[float, float]] = None
    t0: int = 0

    def __post_init__(self):
        if self.k_bounds is None:
            object.__setattr__(self, 'k_bounds', default_k_bounds(self.plant.bes))
        lo, hi = self.k_bounds
        if not lo <= hi:
            raise ValueError(f"k_bounds must satisfy k_lo <= k_hi, got {self.k_bounds}")
        if not 0.0 <= self.e0_mwh <= self.plant.bes.energy_mwh:
            raise ValueError(f"e0 must lie in [0, {self.plant.bes.energy_mwh}], got {self.e0_mwh}")
        if self.w_e < 0:
            raise ValueError("w_e must be >= 0")
        if not math.isclose(self.ace_window.dt_s, self.plant.dt_s):
            raise ValueError("ACE window and plant use different time steps")
        if not math.isclose(self.controller.soc_ref_mwh, self.plant.soc_ref_mwh):
            raise ValueError(f"controller SoC reference {self.controller.soc_ref_mwh} MWh differs from the storage "
                             f"reference {self.plant.soc_ref_mwh} MWh")


@dataclass(frozen=True)
class TrainSample:
    t0: int
    e0_mwh: float
    k_e: float
    j: float


def simulate_cost(problem: WindowProblem, k_e: np.ndarray, e0_mwh: np.ndarray) -> np.ndarray:
    """
    Objective sum_t [P_ACE,t^2 + w_e (e_t - e_ref)^2] of the closed loop for every lane
    (k_e[i], e0_mwh[i]); e_t is the SoC after the step.
    """
    k_e, e0 = np.broadcast_arrays(np.asarray(k_e, dtype=float), np.asarray(e0_mwh, dtype=float))
    zeros = np.zeros(k_e.shape)
    plant, cfg, dt = problem.plant, problem.controller, problem.plant.dt_s
    soc_ref, w_e = plant.soc_ref_mwh, problem.w_e

    gen = GeneratorState(zeros, zeros)
    bes = BesState(e0.copy(), zeros)
    ctrl = ControllerState(*([zeros] * len(fields(ControllerState))))
    cost = zeros.copy()
    for ace in problem.ace_window.values:
        p_ace = ace + gen.p_g_mw + bes.p_e_mw
        feedback = UnitFeedback(gen.p_g_mw, bes.p_e_mw, bes.soc_mwh)
        ctrl, cmd = recharge_step(ctrl, p_ace, feedback, k_e, cfg, dt)
        gen, _ = generator_step(gen, plant.generator, cmd.rega_mw, dt)
        bes, _ = bes_step(bes, plant.bes, cmd.regd_mw, dt)
        dev = bes.soc_mwh - soc_ref
        cost = cost + (p_ace * p_ace + w_e * (dev * dev))
    return cost


def window_objective(problem: WindowProblem, k_e: float) -> float:
    if not math.isfinite(k_e):
        raise ValueError(f"k_e must be finite, got {k_e}")
    return float(simulate_cost(problem, np.array([k_e]), np.array([problem.e0_mwh]))[0])


def golden_section(f: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray,
                   tol: float = K_TOLERANCE) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lane-wise golden-section search of f over [a, b]; every lane keeps its own bracket and
    each iteration costs one evaluation of f over all lanes.
    :return: best point per lane and its objective value
    """
    a, b = np.minimum(a, b).astype(float), np.maximum(a, b).astype(float)
    h = b - a
    width = float(np.max(h))
    n_iter = int(math.ceil(math.log(tol / width) / math.log(INV_PHI))) if width > tol else 0

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(n_iter):
        left = fc < fd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        h = INV_PHI * h
        c_next = np.where(left, a + INV_PHI_SQUARE * h, d)
        d_next = np.where(left, c, a + INV_PHI * h)
        f_new = f(np.where(left, c_next, d_next))
        fc, fd = np.where(left, f_new, fd), np.where(left, fc, f_new)
        c, d = c_next, d_next
    left = fc < fd
    return np.where(left, c, d), np.where(left, fc, fd)


def _grid_argmin(costs: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Row-wise argmin; exact ties go to the grid point with the smaller |k|."""
    order = np.argsort(np.abs(grid), kind='stable')
    return order[np.argmin(costs[:, order], axis=1)]


def solve_window_batch(problem: WindowProblem, e0_mwh: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Optimal K_e and objective for each initial SoC in `e0_mwh`, all on the problem's window."""
    e0 = np.asarray(e0_mwh, dtype=float).reshape(-1)
    lo, hi = problem.k_bounds
    if hi == lo:
        k = np.full(e0.shape, float(lo))
        return k, simulate_cost(problem, k, e0)

    grid = np.linspace(lo, hi, GRID_POINTS)
    costs = simulate_cost(problem, np.tile(grid, len(e0)), np.repeat(e0, GRID_POINTS)).reshape(len(e0), GRID_POINTS)
    best = _grid_argmin(costs, grid)
    k_grid, j_grid = grid[best], costs[np.arange(len(e0)), best]

    spacing = grid[1] - grid[0]
    k_gs, j_gs = golden_section(lambda k: simulate_cost(problem, k, e0),
                                np.clip(k_grid - spacing, lo, hi), np.clip(k_grid + spacing, lo, hi))
    use_gs = (j_gs < j_grid) | ((j_gs == j_grid) & (np.abs(k_gs) < np.abs(k_grid)))
    return np.where(use_gs, k_gs, k_grid), np.where(use_gs, j_gs, j_grid)


def solve_window(problem: WindowProblem) -> TrainSample:
    k, j = solve_window_batch(problem, np.array([problem.e0_mwh]))
    return TrainSample(t0=problem.t0, e0_mwh=problem.e0_mwh, k_e=float(k[0]), j=float(j[0]))
