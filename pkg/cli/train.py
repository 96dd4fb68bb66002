"""
`train`: best-hindsight sweep over an ACE file, bin averaging into a policy table.
"""
import argparse
import logging
from typing import List

from src.config import RunConfig
from src.datasource import load_ace_csv
from src.engine import gain_soc_correlation, tune_weight
from src.hindsight import SocPolicyTable, build_table, gain_profile, policy_shape, save_policy_csv, sweep
from src.signals import AceSeries, describe_ace
from src.utils.errors import ConfigError
from .components.arguments import (add_common_arguments, add_controller_arguments, add_plant_arguments,
                                   add_training_arguments, align_time_step, load_config)

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_common_arguments(parser)
    add_plant_arguments(parser)
    add_training_arguments(parser)
    add_controller_arguments(parser)
    parser.add_argument('--ace', required=True, help="training ACE CSV (t_s,ace_mw)")
    parser.add_argument('--out', required=True, help="policy CSV to write")
    parser.add_argument('--tune-we', help="comma separated w_e candidates, e.g. 10,30,60")
    parser.add_argument('--validation', help="ACE CSV scoring the --tune-we candidates")


def _parse_candidates(text: str) -> List[float]:
    try:
        candidates = [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise ConfigError(f"--tune-we expects comma separated numbers, got {text!r}")
    if not candidates:
        raise ConfigError("--tune-we needs at least one value")
    return candidates


def train_policy(cfg: RunConfig, ace: AceSeries) -> SocPolicyTable:
    samples = sweep(ace, cfg.sweep_config())
    logger.info(f"{len(samples)} hindsight samples")
    if len(samples) > 1:
        logger.info(f"Spearman(|e0 - e_ref|, K_e) = {gain_soc_correlation(samples, cfg.soc_ref_mwh):.3f}")
    return build_table(samples, cfg.energy_mwh, cfg.bins)


def main(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    ace = load_ace_csv(args.ace)
    cfg = align_time_step(cfg, ace)
    logger.info(f"training ACE: {describe_ace(ace)}")

    if args.tune_we:
        if not args.validation:
            raise ConfigError("--tune-we needs a --validation ACE file")
        validation = load_ace_csv(args.validation)
        best_we, table, scores = tune_weight(ace, validation, _parse_candidates(args.tune_we), cfg.sweep_config(),
                                             cfg.bins)
        for s in scores:
            print(f"w_e={s.w_e:g} score={s.score:.6g}")
        print(f"best w_e={best_we:g}")
    else:
        table = train_policy(cfg, ace)

    save_policy_csv(table, args.out)
    print(f"samples: {int(table.counts.sum())}")
    for lo, hi, gain in gain_profile(table):
        print(f"[{lo:.3f}, {hi:.3f}) MWh: mean gain {gain:.4f} MW/MWh")
    logger.info(f"policy shape: {policy_shape(table, cfg.soc_ref_mwh)}")
    logger.info(f"policy written to {args.out}")
    return 0
