"""Command line entry point: ``qlinsys validate|run|examples``.

Exit codes: 0 success, 1 scenario validation error, 2 runtime error,
64 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from importlib import resources
from pathlib import Path

from .pipeline import PipelineError, run_pipeline
from .report import format_report
from .scenario import ScenarioDocument, ScenarioError, parse_scenario

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2
EXIT_USAGE = 64

BUNDLED = ("binary_channel.json", "cnot_entangle.json")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def bundled_scenarios() -> list[Path]:
    root = resources.files("qlinsys.workbench") / "scenarios"
    return [Path(str(root / name)) for name in BUNDLED]


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _precision(text: str) -> int:
    value = int(text)
    if not 0 <= value <= 17:
        raise argparse.ArgumentTypeError("must be between 0 and 17")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qlinsys", description="Run density-matrix scenario pipelines.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    for name in ("validate", "run"):
        p = sub.add_parser(name)
        p.add_argument("file", type=Path)
        p.add_argument("--tolerance", type=_positive_float, default=None,
                       help="comparison tolerance (default: the file's setting, else 1e-10)")
        if name == "run":
            p.add_argument("--format", choices=("human", "machine"), default="human")
            p.add_argument("--precision", type=_precision, default=None,
                           help="fractional digits in the report (default: the file's setting, else 6)")
    sub.add_parser("examples", help="print paths of the bundled scenarios")
    return parser


def _load(args) -> ScenarioDocument:
    try:
        data = args.file.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    return parse_scenario(data, tolerance=args.tolerance)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        if args.command == "examples":
            for path in bundled_scenarios():
                print(path)
            return EXIT_OK
        doc = _load(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qlinsys: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioError as exc:
        print(f"error[{exc.category.value}]: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if args.command == "validate":
        print(
            f"ok: {len(doc.states)} state(s), {len(doc.channels)} channel(s), "
            f"{len(doc.observables)} observable(s), {len(doc.pipeline)} step(s)"
        )
        return EXIT_OK

    if args.precision is not None:
        doc = dataclasses.replace(doc, settings=dataclasses.replace(doc.settings, output_precision=args.precision))
    try:
        report = run_pipeline(doc)
    except PipelineError as exc:
        print(f"error[runtime]: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    sys.stdout.buffer.write(format_report(report, args.format))
    sys.stdout.flush()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
