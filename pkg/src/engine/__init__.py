from .closed_loop import CONTROLLER_KINDS, ControllerSpec, InitialConditions, run_closed_loop
from .compare import (COMPARED_CONTROLLERS, DEFAULT_CONFIGURATIONS, REPORT_COLUMNS, BesConfiguration, ComparisonCase,
                      ReportRow, UnavailableController, compare, report_frame, save_report_csv)
from .metrics import Metrics, compute_metrics
from .trace import TRACE_COLUMNS, SimTrace, save_trace_csv
from .tuning import WeightScore, gain_soc_correlation, tune_weight
