"""
`synth`: seeded synthetic ACE series.
"""
import argparse
import logging

from src.signals import SynthConfig, describe_ace, save_ace_csv, synth_ace
from src.utils.errors import ConfigError
from .components.arguments import add_common_arguments, load_config

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_common_arguments(parser)
    parser.add_argument('--hours', type=float, default=24.0, help="horizon in hours")
    parser.add_argument('--out', required=True, help="ACE CSV to write")
    parser.add_argument('--dt', dest='dt_s', type=float)
    parser.add_argument('--mean-mw', type=float, default=0.0)
    parser.add_argument('--reversion-rate', type=float, default=1.0 / 300.0, help="1/s")
    parser.add_argument('--innovation-mw', type=float, default=30.0)
    parser.add_argument('--heavy-tail-mix', type=float, default=0.3)
    parser.add_argument('--jump-rate', type=float, default=2.0, help="jumps per hour")
    parser.add_argument('--jump-mw', type=float, default=100.0)
    parser.add_argument('--volatility-swing', type=float, default=1.0, help="daily volatility log-amplitude")


def main(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    try:
        synth_cfg = SynthConfig(seed=cfg.seed, horizon_s=args.hours * 3600.0, mean_mw=args.mean_mw,
                                reversion_rate_per_s=args.reversion_rate, innovation_scale_mw=args.innovation_mw,
                                heavy_tail_mix=args.heavy_tail_mix, jump_rate_per_hour=args.jump_rate,
                                jump_scale_mw=args.jump_mw, volatility_swing=args.volatility_swing, dt_s=cfg.dt_s)
    except ValueError as e:
        raise ConfigError(str(e))
    series = synth_ace(synth_cfg)
    save_ace_csv(series, args.out)
    logger.info(f"synthetic ACE: {describe_ace(series)}")
    logger.info(f"wrote {len(series)} samples to {args.out}")
    return 0
