import argparse
import logging
import sys
from typing import List, Optional

import cli.compare
import cli.simulate
import cli.synth
import cli.train
from src.utils import setup_logger
from src.utils.errors import ConfigError, DataError, NumericError

logger = logging.getLogger(__name__)

COMMANDS = {
    "synth": cli.synth,
    "train": cli.train,
    "simulate": cli.simulate,
    "compare": cli.compare,
}

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='agc', description="Battery recharge control for AGC regulation")
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, command in COMMANDS.items():
        command.add_arguments(subparsers.add_parser(name, help=(command.__doc__ or '').strip().split('\n')[0]))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logger(None, level=logging.DEBUG if args.verbose else logging.INFO)
    logger.info(f"{args.command} started")
    try:
        code = COMMANDS[args.command].main(args)
    except DataError as e:
        logger.error(e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as e:
        logger.error(e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError) as e:
        logger.error(e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    logger.info(f"{args.command} finished")
    return code


if __name__ == "__main__":
    sys.exit(main())
