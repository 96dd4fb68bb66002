"""
Flags shared by every subcommand. A flag whose `dest` is a config key overrides that key
when given; flags left at None keep the value from the config file or the defaults.
"""
import argparse
import logging
import math
from typing import Optional

from src.config import RunConfig, known_keys, load_run_config
from src.engine import ControllerSpec
from src.hindsight import SocPolicyTable
from src.signals import AceSeries
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', help="flat 'key = value' config file")
    parser.add_argument('--verbose', action='store_true', help="log at DEBUG level")
    parser.add_argument('--seed', dest='seed', type=int)
    parser.add_argument('--threads', dest='threads', type=int,
                        help="worker processes (default: $AGC_THREADS or 1)")


def add_plant_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group('units')
    group.add_argument('--dt', dest='dt_s', type=float, help="time step in seconds")
    group.add_argument('--ca-mw', dest='ca_mw', type=float, help="RegA capacity")
    group.add_argument('--cd-mw', dest='cd_mw', type=float, help="BES power rating")
    group.add_argument('--duration-min', dest='duration_min', type=float, help="BES energy in minutes at full power")
    group.add_argument('--rte', dest='rte', type=float, help="round-trip efficiency")
    group.add_argument('--soc0-frac', dest='soc0_frac', type=float)


def add_training_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group('best-hindsight training')
    group.add_argument('--we', dest='we', type=float, help="SoC deviation weight")
    group.add_argument('--window-min', dest='window_min', type=float)
    group.add_argument('--bins', dest='bins', type=int)
    group.add_argument('--stride-steps', dest='stride_steps', type=int)
    group.add_argument('--e0-draws', dest='e0_draws', type=int)
    group.add_argument('--k-max', dest='k_max', type=float)


def add_controller_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group('controller')
    group.add_argument('--controller', dest='controller')
    group.add_argument('--no-neutrality', dest='neutrality_enabled', action='store_const', const=False)
    group.add_argument('--no-antiwindup', dest='antiwindup_enabled', action='store_const', const=False)


def load_config(args: argparse.Namespace) -> RunConfig:
    overrides = {key: getattr(args, key) for key in known_keys() if getattr(args, key, None) is not None}
    return load_run_config(args.config, overrides)


def align_time_step(cfg: RunConfig, ace: AceSeries) -> RunConfig:
    """The data's sampling interval is authoritative."""
    if math.isclose(cfg.dt_s, ace.dt_s):
        return cfg
    logger.warning(f"config dt_s={cfg.dt_s:g} s replaced by the data's time step {ace.dt_s:g} s")
    return cfg.override(dt_s=ace.dt_s)


def check_policy(cfg: RunConfig, policy: SocPolicyTable, label: str) -> None:
    if not math.isclose(policy.energy_mwh, cfg.energy_mwh, rel_tol=1e-9):
        raise ConfigError(f"policy {label} covers [0, {policy.energy_mwh:g}] MWh but the storage holds "
                          f"{cfg.energy_mwh:g} MWh")


def build_controller(cfg: RunConfig, kind: str, policy: Optional[SocPolicyTable] = None) -> ControllerSpec:
    lqr = cfg.lqr_model() if kind == 'lqr' else None
    return ControllerSpec(kind, cfg.controller_config(), policy=policy, lqr=lqr)
