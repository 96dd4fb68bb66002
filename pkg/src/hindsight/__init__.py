from .policy import (POLICY_COLUMNS, PolicyShape, SocPolicyTable, build_table, eval_policy, gain_profile, mean_gain_near,
                     policy_shape, save_policy_csv)
from .sweep import SocSamplingPlan, SweepConfig, sweep
from .window import (GRID_POINTS, K_TOLERANCE, TrainSample, WindowProblem, default_k_bounds, golden_section,
                     simulate_cost, solve_window, solve_window_batch, window_objective)
