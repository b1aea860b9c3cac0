"""
Command-line interface for the singularity Hodge-level toolkit.

Subcommands: `analyze` one polynomial, `batch` a file of inputs, and
`check` a named property suite. The exit code is the result channel.
"""

import argparse
import json
import logging
import os
import sys
from typing import Optional, Sequence

from analysis import (
    BatchRunner,
    StrictArgumentParser,
    add_analysis_options,
    analyze,
    batch_exit_code,
    read_batch_file,
    report_to_json,
    request_from_args,
)
from check_suites import SUITES, run_suite
from config import TOOL_VERSION, WORKERS
from exceptions import InputError, SingularityToolError
from utils import render_text_report

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = StrictArgumentParser(prog='shl', description="Hodge invariants of (semi)quasihomogeneous singularities")
    parser.add_argument('--version', action='version', version=f"%(prog)s {TOOL_VERSION}")

    subparsers = parser.add_subparsers(dest='action', help='Available actions')

    # Analyze one input
    analyze_parser = subparsers.add_parser('analyze', help='Analyze a polynomial')
    analyze_parser.add_argument('source', help='Polynomial expression, or a file whose first line is one')
    analyze_parser.add_argument('--json', action='store_true', help='Emit the report as JSON')
    add_analysis_options(analyze_parser)

    # Batch of inputs
    batch_parser = subparsers.add_parser('batch', help='Analyze every line of a file')
    batch_parser.add_argument('file', help='One input per line: <expr> [--weights ..] [--module ..]')
    batch_parser.add_argument('--json', action='store_true', help='Emit one JSON record per line')
    batch_parser.add_argument('--workers', type=int, default=WORKERS, help='Parallel workers (capped by SHL_WORKERS)')

    # Property suites
    check_parser = subparsers.add_parser('check', help='Run a property suite')
    check_parser.add_argument('suite', help=f"One of: {', '.join(SUITES)}")

    return parser


def read_expression(source: str) -> str:
    """The source itself, or the first non-comment line when it names a file."""
    if not os.path.isfile(source):
        return source
    try:
        with open(source, encoding='utf-8') as handle:
            for line in handle:
                line = line.strip()
                if line and not line.startswith('#'):
                    return line
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {source}: {e}") from e
    raise InputError(f"{source} contains no polynomial")


def run_analyze(args: argparse.Namespace) -> int:
    request = request_from_args(read_expression(args.source), args)
    report = analyze(request)
    print(report_to_json(report) if args.json else render_text_report(report))
    return 0


async def run_batch(args: argparse.Namespace) -> int:
    lines = read_batch_file(args.file)
    results = await BatchRunner(args.workers).run(lines)
    for code, payload in results:
        if args.json:
            print(json.dumps(payload))
        elif code == 0:
            print(render_text_report(payload))
            print()
        else:
            print(f"line {payload['line']}: error: {payload['error']} (exit {code})")
    exit_code = batch_exit_code(results)
    logger.info(f"Batch finished: {len(results)} lines, exit code {exit_code}")
    return exit_code


def run_check(args: argparse.Namespace) -> int:
    results = run_suite(args.suite)
    for label, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {label}")
    passed = sum(1 for _, ok in results if ok)
    print(f"{passed}/{len(results)} properties passed")
    return 0 if passed == len(results) else 3


async def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function for the command-line interface."""
    parser = build_parser()

    try:
        args = parser.parse_args(argv)

        if args.action == 'analyze':
            return run_analyze(args)

        elif args.action == 'batch':
            return await run_batch(args)

        elif args.action == 'check':
            return run_check(args)

        else:
            parser.print_help()
            return 1

    except SingularityToolError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        logger.info("Operation cancelled by user")
        return 130
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 3
