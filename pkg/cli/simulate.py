"""
`simulate`: one closed-loop run of the configured controller.
"""
import argparse
import logging

from src.datasource import load_ace_csv, load_policy_csv
from src.engine import compute_metrics, run_closed_loop, save_trace_csv
from src.utils.errors import ConfigError
from .components.arguments import (add_common_arguments, add_controller_arguments, add_plant_arguments,
                                   align_time_step, build_controller, check_policy, load_config)

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_common_arguments(parser)
    add_plant_arguments(parser)
    add_controller_arguments(parser)
    parser.add_argument('--ace', required=True, help="uncorrected ACE CSV (t_s,ace_mw)")
    parser.add_argument('--out', required=True, help="trace CSV to write")
    parser.add_argument('--policy', help="trained policy CSV (proposed controller)")


def main(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    if cfg.controller == 'proposed' and not args.policy:
        raise ConfigError("the proposed controller needs --policy")
    ace = load_ace_csv(args.ace)
    cfg = align_time_step(cfg, ace)
    policy = None
    if args.policy:
        policy = load_policy_csv(args.policy)
        check_policy(cfg, policy, args.policy)

    plant = cfg.plant()
    trace = run_closed_loop(ace, build_controller(cfg, cfg.controller, policy), plant)
    save_trace_csv(trace, args.out)
    metrics = compute_metrics(trace, plant.bes.soc_ref_mwh)
    logger.info(f"{cfg.controller}: mean P_ACE^2 = {metrics.mean_sq_pace_mw2:g} MW^2, "
                f"mean SoC deviation^2 = {metrics.mean_sq_soc_dev_mwh2:g} MWh^2")
    print(metrics)
    return 0
