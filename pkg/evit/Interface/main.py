# evit/Interface/main.py

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from evit.config import DEFAULT_JOBS, setup_logging
from evit.errors import ConfigError, EvitError
from evit.Interface.handler import COMMANDS
from evit.Interface.validator import load_run_config, validate_seed

LOGGER = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evit",
        description="Decide whether, and from which sources, to transfer "
        "health-monitoring knowledge to a target structure.",
    )
    parser.add_argument("--log-level", default=None, help="Override EVIT_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", type=Path, required=True, help="Path to the run config JSON")
        cmd.add_argument(
            "--jobs", type=int, default=DEFAULT_JOBS, help="Worker count (default: EVIT_JOBS)"
        )
        cmd.add_argument("--seed", type=int, default=None, help="Override the master seed")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        setup_logging(args.log_level)
        if args.jobs == 0:
            raise ConfigError("--jobs must be non-zero")
        config = load_run_config(args.config)
        if args.seed is not None:
            config = replace(config, seed=validate_seed(args.seed))

        LOGGER.info("Running %s", args.command, extra={"stage": args.command})
        COMMANDS[args.command](config, jobs=args.jobs)
    except EvitError as exc:
        print(f"evit {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code

    return 0


if __name__ == "__main__":
    sys.exit(main())
