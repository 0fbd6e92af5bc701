"""Command-line entry point: analyze, transform, compare and bench."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..analysis.accesses import DEFAULT_PURE
from ..analysis.sideeffects import pure_functions_from_config
from ..frontend import FrontendError, parse, region_sections, to_text
from ..patterns import MismatchedPrograms, UnknownSection, compare_versions, load_annotations, profile_program, profile_section
from ..transforms import PlanError, TransformError, TransformPlan, run_pipeline
from .bench import CompileError, ConfigError, IoError, RunError, load_config, run_bench
from .report import diff_table, profile_table, records_table, timing_table

EXIT_OK, EXIT_USAGE, EXIT_ANALYSIS, EXIT_COMPILER = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _load(path):
    return parse(_read(path), path=str(path))


def _annotations(path):
    if path is None:
        return None
    try:
        return load_annotations(path)
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _pure(path):
    return DEFAULT_PURE if path is None else pure_functions_from_config(_read(path))


def analyze_rows(ast, annotations=None):
    """Rows for ``analyze``: annotated sections when given, otherwise one per
    region or nest; the program row always closes the table."""
    if annotations:
        sections = [s for s in sorted(annotations) if ast.function(s.function) is not None]
    else:
        sections = region_sections(ast)
    rows = [(str(s), profile_section(ast, s, annotations)) for s in sections]
    rows.append(("Program", profile_program(ast, annotations)))
    return rows


def cmd_analyze(args):
    ast = _load(args.file)
    rows = analyze_rows(ast, _annotations(args.annotations))
    table = profile_table(rows, app=Path(args.file).stem)
    _write(args.out, table.render(args.format))
    return EXIT_OK


def cmd_transform(args):
    plan = TransformPlan.parse(args.passes, threshold=args.threshold)
    ast = _load(args.file)
    result = run_pipeline(ast, plan, _pure(args.pure))
    _write(args.out, to_text(result.ast))
    if args.log:
        _write(args.log, result.log_text())
    else:
        sys.stderr.write(result.log_text())
    return EXIT_OK


def cmd_compare(args):
    auto, manual = _load(args.auto), _load(args.manual)
    report = compare_versions(auto, manual, _annotations(args.annotations))
    table = diff_table(report, app=Path(args.manual).stem)
    _write(args.out, table.render(args.report))
    return EXIT_OK


def cmd_bench(args):
    cfg = load_config(args.config)
    if args.runs is not None:
        cfg.runs = args.runs
    if args.threads is not None:
        cfg.thread_counts = [int(t) for t in args.threads.split(",") if t.strip()]
    if args.self_timed:
        cfg.self_timed = True
    cfg.__post_init__()
    records = run_bench(cfg)
    _write(args.out, records_table(records).to_csv())
    sys.stdout.write(timing_table(records).to_markdown())
    return EXIT_OK


def build_parser():
    p = _Parser(prog="omppat", description="Find, apply and compare OpenMP hand-parallelization patterns.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="P1-P9 pattern profile of a C file")
    a.add_argument("file")
    a.add_argument("--annotations")
    a.add_argument("--out", default="-")
    a.add_argument("--format", choices=("csv", "md"), default="csv")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("transform", help="apply rewrite passes in the fixed order")
    t.add_argument("file")
    t.add_argument("--passes", default="parallelize,region,reduction,schedule,condpar,nowait")
    t.add_argument("--threshold", type=int, default=10000)
    t.add_argument("--out", default="-")
    t.add_argument("--log", help="change log file (default: stderr)")
    t.add_argument("--pure", help="key=value file listing extra pure functions")
    t.set_defaults(func=cmd_transform)

    c = sub.add_parser("compare", help="section-aligned pattern differences")
    c.add_argument("auto")
    c.add_argument("manual")
    c.add_argument("--annotations")
    c.add_argument("--report", choices=("md", "csv"), default="md")
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_compare)

    b = sub.add_parser("bench", help="compile and time program variants")
    b.add_argument("--config", required=True)
    b.add_argument("--runs", type=int)
    b.add_argument("--threads")
    b.add_argument("--self-timed", action="store_true")
    b.add_argument("--out", default="timings.csv")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FrontendError, UnknownSection, MismatchedPrograms, TransformError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except (PlanError, ConfigError, IoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CompileError, RunError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPILER


if __name__ == "__main__":
    sys.exit(main())
