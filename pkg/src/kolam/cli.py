"""Command-line entry point: ``kolam <subcommand> ...``.

Exit codes: 0 success, 1 a validation rule failed, 2 parse or diagnostic
error (also bad usage), 3 I/O error, 4 search exhausted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import AssignmentError, KolamError, SearchExhaustedError
from .geometry import RenderParams
from .grid import SymmetryGroup, parse_dims
from .journal import atomic_write, journal_add, journal_render, parse_assignments
from .mapping import DailyRecord, RenderPlan, resolve
from .render import REGION_CLASSES, render_ascii, render_svg
from .search import SearchRequest, enumerate_single_loop, find_single_loop, serialize_catalog
from .specdsl import SpecError, load_spec
from .trace import deserialize, serialize, trace
from .validate import validate

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_IO, EXIT_EXHAUSTED = 0, 1, 2, 3, 4

_D = RenderParams()
RENDER_DEFAULTS = (
    f"render defaults: dot radius {_D.dot_radius}, stroke {_D.stroke_width}, double-line half gap "
    f"{_D.half_gap}, {_D.pixels_per_unit:g} px per canvas unit, margin {_D.margin}"
)


def _symmetry(text: str) -> SymmetryGroup:
    try:
        return SymmetryGroup.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid(text: str):
    try:
        return parse_dims(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_generate(args, out) -> int:
    request = SearchRequest(args.grid, args.symmetry, seed=args.seed, openness=args.openness,
                            max_restarts=args.max_restarts)
    config = find_single_loop(request)
    atomic_write(args.out, serialize(config))
    return EXIT_OK


def cmd_validate(args, out) -> int:
    config = deserialize(_read(args.file))
    report = validate(config, required_symmetry=args.require_symmetry)
    out.write(report.format_machine() if args.machine else report.format_text())
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_catalog(args, out) -> int:
    args.grid.check_group(args.symmetry)
    catalog = enumerate_single_loop(args.grid, args.symmetry)
    atomic_write(args.out, serialize_catalog(catalog))
    return EXIT_OK


def cmd_render(args, out) -> int:
    params = RenderParams()
    config = deserialize(_read(args.gates))
    spec = load_spec(_read(args.spec), params)
    if args.record is None:
        plan = resolve(spec, DailyRecord(None, {}), params) if spec.bindings else RenderPlan()
    else:
        plan = resolve(spec, DailyRecord(None, parse_assignments(args.record)), params)
    atomic_write(args.out, render_svg(config, plan, params, region_class=args.regions))
    return EXIT_OK


def cmd_journal_add(args, out) -> int:
    journal_add(args.journal, args.date, args.assignments)
    return EXIT_OK


def cmd_journal_render(args, out) -> int:
    for path in journal_render(args.journal, args.spec, args.out, workers=args.workers):
        out.write(f"{path}\n")
    return EXIT_OK


def cmd_trace(args, out) -> int:
    config = deserialize(_read(args.gates))
    out.write(render_ascii(config))
    out.write(f"loops={len(trace(config))}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kolam", description="Synthesize, validate and render pulli kolams.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("generate", help="search for a single-loop gate configuration")
    p.add_argument("--grid", type=_grid, required=True, help="dot grid as WxH")
    p.add_argument("--symmetry", type=_symmetry, default=SymmetryGroup.NONE,
                   help="none, h, v, rot180, d2 or d4 (default none)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--openness", type=float, default=0.5, help="initial open-gate probability")
    p.add_argument("--max-restarts", type=int, default=200)
    p.add_argument("--out", required=True, help="gate file to write")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="check the five drawing rules on a gate file")
    p.add_argument("file")
    p.add_argument("--machine", action="store_true", help="key=value output")
    p.add_argument("--require-symmetry", type=_symmetry, default=None, metavar="S",
                   help="demand at least this group instead of any non-trivial one ('none' waives it)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("catalog", help="enumerate all symmetric single-loop configurations")
    p.add_argument("--grid", type=_grid, required=True)
    p.add_argument("--symmetry", type=_symmetry, default=SymmetryGroup.NONE)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("render", help="render a gate file to SVG under a mapping spec", epilog=RENDER_DEFAULTS)
    p.add_argument("--gates", required=True)
    p.add_argument("--spec", required=True, help="mapping spec (.kmap)")
    p.add_argument("--record", help="inline record 'k=v,k=v'")
    p.add_argument("--regions", choices=REGION_CLASSES, default="all", help="which regions take the fill")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("journal", help="daily-record journal")
    jsub = p.add_subparsers(dest="journal_command", required=True, metavar="ACTION")
    q = jsub.add_parser("add", help="add or replace one day's record")
    q.add_argument("journal")
    q.add_argument("date", help="YYYY-MM-DD")
    q.add_argument("assignments", nargs="+", metavar="KEY=VALUE")
    q.set_defaults(func=cmd_journal_add)
    q = jsub.add_parser("render", help="render every day plus a contact sheet", epilog=RENDER_DEFAULTS)
    q.add_argument("journal")
    q.add_argument("--spec", required=True)
    q.add_argument("--out", required=True, help="output directory")
    q.add_argument("--workers", type=int, default=1)
    q.set_defaults(func=cmd_journal_render)

    p = sub.add_parser("trace", help="ASCII preview of a gate file")
    p.add_argument("--gates", required=True)
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except SpecError as exc:
        for d in exc.diagnostics:
            err.write(f"{d}\n")
        return EXIT_PARSE
    except SearchExhaustedError as exc:
        err.write(f"kolam: {exc}\n")
        return EXIT_EXHAUSTED
    except OSError as exc:
        err.write(f"kolam: {exc}\n")
        return EXIT_IO
    except (KolamError, AssignmentError, ValueError) as exc:
        err.write(f"kolam: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
