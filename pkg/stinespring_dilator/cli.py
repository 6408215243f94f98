"""
Command-line interface for the Stinespring dilator.

This module handles argument parsing and configuration loading.
All business logic is delegated to ``pipeline``.

Configuration is driven by an optional dilator.yaml; CLI flags override
tolerances and generator parameters.
"""
import argparse
import logging
import os
import sys
from typing import List, Optional

from . import pipeline
from .config import Config
from .core.numerics import TolerancePolicy
from .errors import ConfigError, DilationError, InstanceFormatError, MathematicalFailure
from .services import reports
from .services.instances import write_json

logger = logging.getLogger(__name__)

CONFIG_CANDIDATES = ('dilator.yml', 'dilator.yaml')


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors are input errors: exit 1 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(pipeline.EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _set_console_level(level: int) -> None:
    for handler in logging.getLogger('stinespring_dilator').handlers:
        if not isinstance(handler, logging.FileHandler):
            handler.setLevel(level)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='stinespring-dilator',
        description='Minimal Stinespring representations for CP maps and φ-maps',
    )
    parser.add_argument('--config', type=str, help='Path to the YAML configuration file')
    parser.add_argument('--log-level', type=str,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        help='Logging level')
    parser.add_argument('--atol', type=float, help='Absolute tolerance for residuals')
    parser.add_argument('--rank-rtol', type=float,
                        help='Relative singular-value cutoff for rank decisions')
    parser.add_argument('--psd-rtol', type=float,
                        help='Relative eigenvalue slack for positivity decisions')
    parser.add_argument('--human', action='store_true',
                        help='Render reports as text instead of JSON')

    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    check = sub.add_parser('check', help='Check complete positivity of φ and the φ-map identity')
    check.add_argument('instance', help='Instance file (JSON)')
    check.add_argument('--out', type=str, help='Also write the report to this file')

    dilate = sub.add_parser('dilate', help='Construct and verify a minimal representation')
    dilate.add_argument('instance', help='Instance file (JSON)')
    dilate.add_argument('--out', type=str, required=True,
                        help='Output file for the representation and its report')

    equiv = sub.add_parser('equiv', help='Intertwining unitaries between two representations')
    equiv.add_argument('instance', help='Instance file (JSON)')
    equiv.add_argument('rep_a', help='First representation file')
    equiv.add_argument('rep_b', help='Second representation file')
    equiv.add_argument('--out', type=str, help='Output file for the witness')

    demo = sub.add_parser('demo-asadi', help='Run the built-in Schur-multiplier example')
    demo.add_argument('--export', type=str, metavar='DIR',
                      help='Write the example instance and explicit pair to DIR')

    gen = sub.add_parser('gen', help='Generate a seeded random valid instance')
    gen.add_argument('--n', type=int, help='Matrix algebra size')
    gen.add_argument('--k', type=int, help='Module rank (E = Aᵏ)')
    gen.add_argument('--h1', type=int, help='dim H₁')
    gen.add_argument('--h2', type=int, help='dim H₂')
    gen.add_argument('--r', type=int, help='Choi rank of φ')
    gen.add_argument('--seed', type=int, help='Random seed')
    gen.add_argument('--out', type=str, required=True, help='Output instance file')
    return parser


def _load_config(args: argparse.Namespace) -> Config:
    default_config_path = None
    if not args.config:
        cwd = os.getcwd()
        for candidate in CONFIG_CANDIDATES:
            path = os.path.join(cwd, candidate)
            if os.path.exists(path):
                default_config_path = path
                break
    config = Config(config_file=args.config or default_config_path)
    overrides = {
        'tolerance.atol': args.atol,
        'tolerance.rank_rtol': args.rank_rtol,
        'tolerance.psd_rtol': args.psd_rtol,
        'human': args.human or None,
        'log_level': args.log_level,
    }
    if args.command == 'gen':
        for key in ('n', 'k', 'h1', 'h2', 'r', 'seed'):
            overrides[f'gen.{key}'] = getattr(args, key)
    config.update_from_args(overrides)
    return config


def _dispatch(args: argparse.Namespace, config: Config,
              tol: TolerancePolicy) -> pipeline.CommandResult:
    indent = config.get('report_indent', 2)
    if args.command == 'check':
        return pipeline.run_check(args.instance, tol)
    if args.command == 'dilate':
        return pipeline.run_dilate(args.instance, args.out, tol, indent)
    if args.command == 'equiv':
        return pipeline.run_equiv(args.instance, args.rep_a, args.rep_b, tol, args.out, indent)
    if args.command == 'demo-asadi':
        return pipeline.run_demo(tol, args.export, indent)
    gen = config.get('gen')
    return pipeline.run_gen(int(gen['n']), int(gen['k']), int(gen['h1']), int(gen['h2']),
                            int(gen['r']), int(gen['seed']), args.out, tol, indent)


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point.

    Returns 0 on success, 1 on input/parse errors (including infeasible
    generator dimensions) and 2 on mathematical failure; used as the process
    exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = _load_config(args)
        tol = TolerancePolicy.from_config(config)
    except (ConfigError, ValueError) as e:
        logger.error("%s", e)
        return pipeline.EXIT_INPUT_ERROR

    log_level = config.get('log_level')
    if log_level:
        _set_console_level(getattr(logging, str(log_level).upper(), logging.INFO))

    try:
        result = _dispatch(args, config, tol)
    except MathematicalFailure as e:
        logger.error("%s: %s", type(e).__name__, e)
        result = pipeline.CommandResult(pipeline.EXIT_MATH_FAILURE,
                                        reports.error_report(args.command, e))
    except (InstanceFormatError, OSError, DilationError, ValueError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        result = pipeline.CommandResult(pipeline.EXIT_INPUT_ERROR,
                                        reports.error_report(args.command, e))

    human = bool(config.get('human')) or args.command == 'demo-asadi'
    sys.stdout.write(reports.format_report(result.report, human, config.get('report_indent', 2)))

    out = getattr(args, 'out', None)
    if args.command == 'check' and out:
        try:
            write_json(result.report, out, config.get('report_indent', 2))
        except OSError as e:
            logger.error("Could not write report to %s: %s", out, e)
            return pipeline.EXIT_INPUT_ERROR
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
