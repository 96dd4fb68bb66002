"""
Run configuration: a flat `key = value` text file, overridden by command-line flags.
"""
import ast
import dataclasses
import functools
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import numpy as np

from src.controllers import (ControllerConfig, LqrModel, PiGains, build_state_matrices, default_state_weights,
                             synthesize_lqr)
from src.hindsight.sweep import SocSamplingPlan, SweepConfig
from src.plant import BesParams, GeneratorParams, PlantConfig
from src.utils.errors import ConfigError
from .validation import ERROR, evaluate_config, known_keys

logger = logging.getLogger(__name__)

THREADS_ENV = 'AGC_THREADS'


@dataclass(frozen=True)
class RunConfig:
    controller: str = 'proposed'
    # AGC gains and filters
    kp: float = 0.0
    ki: float = 0.4
    kp_d: float = 1.0
    ki_d: float = 0.8
    ta_s: float = 60.0
    td_s: float = 10.0
    neutrality_gain: float = 2.0
    neutrality_enabled: bool = True
    antiwindup_enabled: bool = True
    # LQR
    lqr_gain: Optional[Tuple[float, ...]] = None
    m_inertia: float = 10.0
    q_diag: Optional[Tuple[float, ...]] = None
    r: float = 1.0
    lqr_b_convention: str = 'physical'
    # units
    dt_s: float = 2.0
    ca_mw: float = 400.0
    tg_s: float = 20.0
    deadband_mw: float = 5.0
    ramp_pct_per_min: float = 10.0
    cd_mw: float = 200.0
    duration_min: float = 15.0
    rte: float = 0.85
    soc0_frac: float = 0.5
    bes_units: int = 1
    # best-hindsight training
    we: float = 60.0
    window_min: float = 15.0
    bins: int = 500
    stride_steps: Optional[int] = None
    e0_draws: int = 50
    k_max: Optional[float] = None
    seed: int = 0
    threads: int = 1

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> 'RunConfig':
        values = {k: tuple(v) if isinstance(v, list) else v for k, v in values.items()}
        problems = evaluate_config(values)
        for problem in problems:
            logger.log(problem.severity, problem.reason)
        errors = [p.reason for p in problems if p.severity >= ERROR]
        if errors:
            raise ConfigError('invalid configuration: ' + '; '.join(errors))
        return cls(**values)

    def override(self, **values) -> 'RunConfig':
        merged = dataclasses.asdict(self)
        merged.update({k: v for k, v in values.items() if v is not None})
        return RunConfig.from_mapping(merged)

    @property
    def energy_mwh(self) -> float:
        return self.cd_mw * self.duration_min / 60.0

    @property
    def soc_ref_mwh(self) -> float:
        return 0.5 * self.energy_mwh

    @property
    def window_steps(self) -> int:
        return max(1, int(round(self.window_min * 60.0 / self.dt_s)))

    def plant(self) -> PlantConfig:
        generator = GeneratorParams(capacity_mw=self.ca_mw, deadband_mw=self.deadband_mw, governor_tc_s=self.tg_s,
                                    ramp_mw_per_s=self.ca_mw * self.ramp_pct_per_min / 100.0 / 60.0)
        bes = BesParams.from_rating(self.cd_mw, self.duration_min, self.rte)
        return PlantConfig(generator=generator, bes=bes, dt_s=self.dt_s, soc0_mwh=self.soc0_frac * bes.energy_mwh,
                           bes_units=self.bes_units)

    def controller_config(self) -> ControllerConfig:
        return ControllerConfig(rega_gains=PiGains(self.kp, self.ki), regd_gains=PiGains(self.kp_d, self.ki_d),
                                ta_s=self.ta_s, td_s=self.td_s, ca_mw=self.ca_mw, cd_mw=self.cd_mw,
                                neutrality_gain=self.neutrality_gain, neutrality_enabled=self.neutrality_enabled,
                                antiwindup_enabled=self.antiwindup_enabled, soc_ref_mwh=self.soc_ref_mwh)

    def lqr_model(self) -> LqrModel:
        q_diag = self.q_diag
        if q_diag is None:
            q_diag = tuple(np.diag(default_state_weights(self.cd_mw, self.ca_mw, self.energy_mwh)))
        return _lqr_model(self.m_inertia, self.ta_s, self.kp, self.ki, tuple(q_diag), self.r,
                          self.lqr_b_convention, self.lqr_gain)

    def sweep_config(self) -> SweepConfig:
        k_bounds = None if self.k_max is None else (0.0, self.k_max)
        return SweepConfig(window_steps=self.window_steps, plant=self.plant(), controller=self.controller_config(),
                           w_e=self.we, stride_steps=self.stride_steps,
                           plan=SocSamplingPlan(n_strata=self.bins, draws_per_start=self.e0_draws),
                           k_bounds=k_bounds, seed=self.seed, workers=self.threads)


@functools.lru_cache()
def _lqr_model(m_inertia: float, ta_s: float, kp: float, ki: float, q_diag: Tuple[float, ...], r: float,
               b_convention: str, gain: Optional[Tuple[float, ...]]) -> LqrModel:
    a, b = build_state_matrices(m_inertia, ta_s, kp, ki, b_convention)
    return synthesize_lqr(a, b, np.diag(q_diag), r, gain=gain)


def _parse_value(text: str) -> Any:
    lowered = text.lower()
    if lowered in ('true', 'false'):
        return lowered == 'true'
    if lowered in ('none', 'null', ''):
        return None
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def parse_config_text(text: str) -> Dict[str, Any]:
    values = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        if not sep:
            raise ConfigError(f"config line {line_no}: expected 'key = value', got {line!r}")
        values[key.strip()] = _parse_value(value.strip())
    return values


def load_run_config(path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None,
                    environ: Optional[Mapping[str, str]] = None) -> RunConfig:
    """Defaults < AGC_THREADS < config file < explicit overrides (flags)."""
    environ = os.environ if environ is None else environ
    values: Dict[str, Any] = {}
    if environ.get(THREADS_ENV):
        try:
            values['threads'] = int(environ[THREADS_ENV])
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {environ[THREADS_ENV]!r}")
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        values.update(parse_config_text(path.read_text(encoding='utf-8')))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig.from_mapping(values)
