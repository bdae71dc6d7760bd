"""
Command-line entry point.

    zeroflux run   --config FILE [--out DIR]
    zeroflux study --config FILE --levels N [--out DIR] [--workers N]
    zeroflux check --config FILE [--out DIR]

Exit status: 0 success, 1 solve failure / violated invariant / failed
check, 2 configuration error.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from zeroflux import __version__
from zeroflux.cli.check import check
from zeroflux.cli.output import jsonable, prepare_output_dir, write_json
from zeroflux.cli.runner import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, run
from zeroflux.cli.study import refine_study
from zeroflux.config.run_config import load_run_config
from zeroflux.utils.errors import ConfigError
from zeroflux.utils.logger import get_logger, set_level

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='zeroflux',
        description='Finite-volume solver and certificates for zero-flux degenerate convection-diffusion',
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--log-level', default=None, type=str.upper,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='overrides ZEROFLUX_LOG_LEVEL')
    sub = parser.add_subparsers(dest='command', required=True)

    run_parser = sub.add_parser('run', help='march one configuration and certify it')
    run_parser.add_argument('--config', required=True, help='JSON run configuration')
    run_parser.add_argument('--out', default=None, help='run directory (overrides output_dir)')

    study_parser = sub.add_parser('study', help='mesh-refinement convergence study')
    study_parser.add_argument('--config', required=True, help='JSON run configuration (coarsest level)')
    study_parser.add_argument('--levels', type=int, required=True, help='number of levels (>= 2)')
    study_parser.add_argument('--out', default=None, help='study directory (overrides output_dir)')
    study_parser.add_argument('--workers', type=int, default=None, help='parallel level runs')

    check_parser = sub.add_parser('check', help='problem, flux-axiom and mesh checks')
    check_parser.add_argument('--config', required=True, help='JSON run configuration')
    check_parser.add_argument('--out', default=None, help='also write check.json into this directory')
    return parser


def _command_run(args: argparse.Namespace) -> int:
    result = run(load_run_config(args.config), args.out)
    print(f"{result.status}: {result.output_dir}")
    return result.exit_code


def _command_study(args: argparse.Namespace) -> int:
    if args.levels < 2:
        raise ConfigError("invalid study request", [('--levels', f"needs at least 2 levels, got {args.levels}")])
    result = refine_study(load_run_config(args.config), args.levels, args.out, args.workers)
    print(result.table.to_string(index=False))
    return result.exit_code


def _command_check(args: argparse.Namespace) -> int:
    report = check(load_run_config(args.config))
    if args.out is not None:
        write_json(prepare_output_dir(args.out) / 'check.json', report)
    print(json.dumps(jsonable(report), indent=2))
    return EXIT_OK if report['pass'] else EXIT_FAILURE


COMMANDS = {
    'run': _command_run,
    'study': _command_study,
    'check': _command_check,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_level(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        for location, message in e.issues:
            print(f"config error at {location}: {message}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())
