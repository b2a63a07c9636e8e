"""asd-boundary scripts."""

from __future__ import annotations

import argparse
import logging
import os.path

from .exceptions import AsdBoundaryError
from .experiments import COMMAND_HELP, SCHEMAS, ExperimentSpec, run, run_suite


def check_existense(file_name: str) -> str:
    """Check file name for existence."""
    if not os.path.exists(file_name):
        raise argparse.ArgumentTypeError(f"{file_name} is an invalid file name")
    return file_name


def run_experiment(args: argparse.Namespace) -> int:
    """Run the experiment named by the sub-command."""
    params = {param.name: getattr(args, param.name) for param in SCHEMAS[args.command] if getattr(args, param.name) is not None}
    spec = ExperimentSpec(args.command, params, args.seed, args.output)
    return run(spec).exit_code


def run_suite_file(args: argparse.Namespace) -> int:
    """Run a suite file and print its summary."""
    try:
        result = run_suite(args.path, args.output_dir)
    except AsdBoundaryError as exc:
        print(f"suite: {type(exc).__name__}: {exc}")
        return exc.exit_code
    print(result.summary, end="")
    return result.exit_code


def main() -> None:
    """Main entry point."""
    parser = argparse.ArgumentParser(
        prog="asd-boundary",
        description="Boundary contributions of ASD moduli spaces. All lengths are dimensionless patch units.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(help="sub-command help", dest="command")
    subparsers.required = True

    for command, schema in SCHEMAS.items():
        parser_command = subparsers.add_parser(command, help=COMMAND_HELP[command])
        for param in schema:
            help_text = param.help or f"default {param.default}"
            parser_command.add_argument(f"--{param.name}", dest=param.name, choices=param.choices, help=help_text)
        parser_command.add_argument("--seed", type=int, default=0, help="random seed")
        parser_command.add_argument("--output", metavar="PATH", help="JSON result path, default ./<command>.json")
        parser_command.set_defaults(func=run_experiment)

    parser_suite = subparsers.add_parser("suite", help="run a suite of experiments from a JSON file")
    parser_suite.add_argument("path", metavar="SUITE_FILE", type=check_existense, help="suite configuration")
    parser_suite.add_argument("--output-dir", dest="output_dir", default=".", help="directory for result documents")
    parser_suite.set_defaults(func=run_suite_file)

    args = parser.parse_args()
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if hasattr(args, "func"):
        raise SystemExit(args.func(args))
