"""
Multi-configuration comparison: every controller on every storage rating, same test series,
same initial conditions. One row per (configuration, controller).
"""
import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import pandas as pd

from src.plant import PlantConfig
from src.signals.ace_series import AceSeries
from src.utils.errors import ConfigError
from src.utils.io import write_csv
from .closed_loop import ControllerSpec, run_closed_loop
from .metrics import compute_metrics

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ['config', 'controller', 'mean_sq_pace_e3', 'mean_sq_soc_dev', 'error']
COMPARED_CONTROLLERS = ('proposed', 'lqr', 'pjm')

_LABEL = re.compile(r'^\s*(\d+(?:\.\d+)?)\s*MW\s*/\s*(\d+(?:\.\d+)?)\s*min\s*$', re.IGNORECASE)


@dataclass(frozen=True)
class BesConfiguration:
    power_mw: float
    duration_min: float

    @property
    def label(self) -> str:
        return f"{self.power_mw:g}MW/{self.duration_min:g}min"

    @property
    def energy_mwh(self) -> float:
        return self.power_mw * self.duration_min / 60.0

    @classmethod
    def parse(cls, label: str) -> 'BesConfiguration':
        match = _LABEL.match(label)
        if not match:
            raise ConfigError(f"cannot parse storage configuration {label!r}, expected e.g. '200MW/15min'")
        return cls(float(match.group(1)), float(match.group(2)))


DEFAULT_CONFIGURATIONS = (
    BesConfiguration(200, 15),
    BesConfiguration(200, 20),
    BesConfiguration(200, 30),
    BesConfiguration(200, 60),
    BesConfiguration(300, 15),
    BesConfiguration(400, 15),
)


@dataclass(frozen=True)
class UnavailableController:
    """A controller that could not be set up for a configuration; it is reported, not run."""
    kind: str
    reason: str


@dataclass(frozen=True, eq=False)
class ComparisonCase:
    configuration: BesConfiguration
    plant: PlantConfig
    controllers: Tuple[Union[ControllerSpec, UnavailableController], ...]


@dataclass(frozen=True)
class ReportRow:
    config: str
    controller: str
    mean_sq_pace_e3: float
    mean_sq_soc_dev: float
    error: str = ''


def _run_row(task: Tuple[AceSeries, str, PlantConfig, ControllerSpec]) -> ReportRow:
    ace, label, plant, spec = task
    metrics = compute_metrics(run_closed_loop(ace, spec, plant), plant.bes.soc_ref_mwh)
    return ReportRow(label, spec.kind, metrics.mean_sq_pace_mw2 / 1e3, metrics.mean_sq_soc_dev_mwh2)


def _run_rows(tasks: List[Tuple[AceSeries, str, PlantConfig, ControllerSpec]], workers: int) -> List[ReportRow]:
    if workers <= 1:
        rows = []
        for task in tasks:
            rows.append(_run_row(task))
            logger.info(f"{task[1]} {task[3].kind}: done")
        return rows
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_run_row, tasks))


def compare(ace: AceSeries, cases: Sequence[ComparisonCase], workers: int = 1) -> List[ReportRow]:
    """
    Rows come back in case order, then controller order, whatever the worker count. An
    UnavailableController yields a row with NaN metrics and its reason in `error`.
    """
    tasks = [(ace, case.configuration.label, case.plant, spec) for case in cases for spec in case.controllers
             if isinstance(spec, ControllerSpec)]
    logger.info(f"comparing {len(tasks)} runs over {len(cases)} configuration(s), {workers} worker(s)")
    results = iter(_run_rows(tasks, workers))
    rows = []
    for case in cases:
        for entry in case.controllers:
            if isinstance(entry, ControllerSpec):
                rows.append(next(results))
            else:
                logger.error(f"{case.configuration.label} {entry.kind}: {entry.reason}")
                rows.append(ReportRow(case.configuration.label, entry.kind, math.nan, math.nan, entry.reason))
    return rows


def report_frame(rows: Sequence[ReportRow]) -> pd.DataFrame:
    return pd.DataFrame([(r.config, r.controller, r.mean_sq_pace_e3, r.mean_sq_soc_dev, r.error) for r in rows],
                        columns=REPORT_COLUMNS)


def save_report_csv(rows: Sequence[ReportRow], path: Union[str, Path]) -> None:
    write_csv(report_frame(rows), path)
