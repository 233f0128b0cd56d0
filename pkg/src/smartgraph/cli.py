"""Command-line entry point: parse -> graph -> detect -> report.

Exit codes: 0 clean, 1 findings per the --fail-on policy, 2 input or
configuration errors (including parse diagnostics of severity error).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .access import resolve_unit
from .config import ConfigError, KeywordConfig, load_config
from .detectors import run_all
from .model import DiagnosticSeverity
from .parser import parse_source
from .report import build_report, exit_code, render_dot, render_text, serialize_json


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smartgraph",
        description="Structural and heuristic analysis of Solidity contracts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze Solidity files")
    analyze.add_argument("paths", nargs="+", help="Solidity source files")
    analyze.add_argument("--format", choices=("text", "json", "dot"), default="text")
    analyze.add_argument("--out", help="output file, or directory for multiple inputs")
    analyze.add_argument("--detectors", help="comma-separated detector ids (default: all)")
    analyze.add_argument("--config", help="keyword configuration file")
    analyze.add_argument("--baseline", help="previous contract version for signature drift")
    analyze.add_argument("--max-distance", type=int, help="price/transfer statement distance")
    analyze.add_argument("--fail-on", choices=("none", "warning", "high"), default="none")
    analyze.add_argument("--timestamps", action="store_true", help="embed a generation timestamp")
    analyze.add_argument("--no-color", action="store_true", help="disable ANSI colors")
    analyze.add_argument("--figures", help="directory for warning-summary figures")
    return parser


_EXTENSIONS = {"text": ".txt", "json": ".json", "dot": ".dot"}


def _output_path(out: str, source: Path, fmt: str, multi: bool) -> Path:
    target = Path(out)
    if multi or target.is_dir() or out.endswith(os.sep):
        target.mkdir(parents=True, exist_ok=True)
        return target / (source.stem + _EXTENSIONS[fmt])
    target.parent.mkdir(parents=True, exist_ok=True)
    return target


def _analyze(args: argparse.Namespace) -> int:
    try:
        cfg = load_config(args.config) if args.config else KeywordConfig()
        if args.max_distance is not None:
            cfg.max_distance = args.max_distance
        cfg.validate()
        enabled = None
        if args.detectors is not None:
            enabled = {d.strip() for d in args.detectors.split(",") if d.strip()}
    except (ConfigError, OSError) as exc:
        print(f"smartgraph: {exc}", file=sys.stderr)
        return 2

    baseline_unit = None
    if args.baseline:
        try:
            baseline_text = Path(args.baseline).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"smartgraph: {exc}", file=sys.stderr)
            return 2
        baseline_unit = resolve_unit(parse_source(baseline_text, path=args.baseline))

    color = (
        sys.stdout.isatty()
        and not args.no_color
        and "NO_COLOR" not in os.environ
    )

    multi = len(args.paths) > 1
    code = 0
    for raw_path in args.paths:
        source_path = Path(raw_path)
        try:
            source = source_path.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            print(f"smartgraph: {exc}", file=sys.stderr)
            code = max(code, 2)
            continue

        unit = resolve_unit(parse_source(source, path=raw_path))
        try:
            warnings = run_all(unit, cfg, baseline=baseline_unit, enabled=enabled)
        except ConfigError as exc:
            print(f"smartgraph: {exc}", file=sys.stderr)
            return 2
        report = build_report(unit, warnings, timestamps=args.timestamps)

        for diag in report.diagnostics:
            print(
                f"smartgraph: {raw_path}:{diag.line}: {diag.severity.value}: {diag.message}",
                file=sys.stderr,
            )

        if args.format == "json":
            rendered = serialize_json(report)
        elif args.format == "dot":
            rendered = render_dot(report)
        else:
            rendered = render_text(report, color=color and args.out is None)

        if args.out:
            target = _output_path(args.out, source_path, args.format, multi)
            target.write_text(rendered, encoding="utf-8")
        else:
            sys.stdout.write(rendered)

        if args.figures:
            from .figures import save_warning_figure

            fig_dir = Path(args.figures)
            fig_dir.mkdir(parents=True, exist_ok=True)
            save_warning_figure(report, str(fig_dir / (source_path.stem + "_warnings.png")))

        file_code = exit_code(report, args.fail_on)
        if any(d.severity is DiagnosticSeverity.ERROR for d in report.diagnostics):
            file_code = 2
        code = max(code, file_code)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = _build_arg_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze":
        return _analyze(args)
    parser.error(f"unknown command: {args.command}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
