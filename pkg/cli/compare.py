"""
`compare`: every controller on every storage configuration against one test series.
"""
import argparse
import logging
from pathlib import Path
from typing import Dict, List, Optional

from src.config import RunConfig
from src.datasource import load_ace_csv, load_policy_csv
from src.engine import (COMPARED_CONTROLLERS, DEFAULT_CONFIGURATIONS, BesConfiguration, ComparisonCase,
                        UnavailableController, compare, save_report_csv)
from src.hindsight import SocPolicyTable
from src.signals import AceSeries
from src.utils.errors import ConfigError
from .components.arguments import (add_common_arguments, add_controller_arguments, add_plant_arguments,
                                   add_training_arguments, align_time_step, build_controller, check_policy,
                                   load_config)
from .train import train_policy

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_common_arguments(parser)
    add_plant_arguments(parser)
    add_training_arguments(parser)
    add_controller_arguments(parser)
    parser.add_argument('--ace', required=True, help="test ACE CSV (t_s,ace_mw)")
    parser.add_argument('--out', required=True, help="report CSV to write")
    parser.add_argument('--configs', help="comma separated storage ratings, e.g. 200MW/15min,300MW/15min")
    parser.add_argument('--policy', action='append', default=[], metavar='LABEL=PATH',
                        help="trained policy for one configuration (repeatable)")
    parser.add_argument('--policy-dir', help="directory holding policy_<P>MW_<D>min.csv files")
    parser.add_argument('--train', help="ACE CSV used to train the policies that were not supplied")


def policy_file_name(configuration: BesConfiguration) -> str:
    return f"policy_{configuration.power_mw:g}MW_{configuration.duration_min:g}min.csv"


def _parse_configurations(text: Optional[str]) -> List[BesConfiguration]:
    if not text:
        return list(DEFAULT_CONFIGURATIONS)
    return [BesConfiguration.parse(label) for label in text.split(',') if label.strip()]


def _explicit_policies(items: List[str]) -> Dict[str, Path]:
    policies = {}
    for item in items:
        label, sep, path = item.partition('=')
        if not sep or not path:
            raise ConfigError(f"--policy expects LABEL=PATH, got {item!r}")
        policies[BesConfiguration.parse(label).label] = Path(path)
    return policies


def _find_policy(configuration: BesConfiguration, explicit: Dict[str, Path],
                 policy_dir: Optional[str]) -> Optional[Path]:
    if configuration.label in explicit:
        return explicit[configuration.label]
    if policy_dir:
        candidate = Path(policy_dir) / policy_file_name(configuration)
        if candidate.exists():
            return candidate
    return None


def _resolve_policies(configurations: List[BesConfiguration], configs: Dict[str, RunConfig], args,
                      train_ace: Optional[AceSeries]) -> Dict[str, Optional[SocPolicyTable]]:
    """Policy per configuration label; None where nothing was supplied and there is no training data."""
    explicit = _explicit_policies(args.policy)
    policies = {}
    for configuration in configurations:
        label = configuration.label
        path = _find_policy(configuration, explicit, args.policy_dir)
        if path is not None:
            policies[label] = load_policy_csv(path)
            check_policy(configs[label], policies[label], str(path))
        elif train_ace is not None:
            logger.info(f"training policy for {label}")
            policies[label] = train_policy(configs[label], train_ace)
        else:
            policies[label] = None
    return policies


def _controller(cfg: RunConfig, kind: str, label: str, policy: Optional[SocPolicyTable]):
    if kind == 'proposed' and policy is None:
        return UnavailableController(kind, f"no trained policy for {label} (use --policy, --policy-dir or --train)")
    return build_controller(cfg, kind, policy)


def main(args: argparse.Namespace) -> int:
    base = load_config(args)
    ace = load_ace_csv(args.ace)
    base = align_time_step(base, ace)
    train_ace = load_ace_csv(args.train) if args.train else None
    if train_ace is not None and train_ace.dt_s != ace.dt_s:
        raise ConfigError(f"training data uses dt={train_ace.dt_s:g} s, test data dt={ace.dt_s:g} s")

    configurations = _parse_configurations(args.configs)
    configs = {c.label: base.override(cd_mw=c.power_mw, duration_min=c.duration_min) for c in configurations}
    policies = _resolve_policies(configurations, configs, args, train_ace)

    cases = []
    for configuration in configurations:
        cfg = configs[configuration.label]
        specs = tuple(_controller(cfg, kind, configuration.label, policies[configuration.label])
                      for kind in COMPARED_CONTROLLERS)
        cases.append(ComparisonCase(configuration, cfg.plant(), specs))

    rows = compare(ace, cases, workers=base.threads)
    save_report_csv(rows, args.out)
    for row in rows:
        if row.error:
            print(f"{row.config},{row.controller},error: {row.error}")
        else:
            print(f"{row.config},{row.controller},{row.mean_sq_pace_e3:g},{row.mean_sq_soc_dev:g}")
    logger.info(f"report with {len(rows)} rows written to {args.out}")
    failed = sorted({row.config for row in rows if row.error})
    if failed:
        logger.error(f"incomplete comparison for configuration(s): {', '.join(failed)}")
        return 2
    return 0
