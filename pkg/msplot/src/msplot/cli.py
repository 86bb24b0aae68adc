"""Command line front end.

Exit codes: 0 success, 1 usage or schema errors, 2 runtime failures
(unreadable files and the like).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .figures import FigureSpec, plot_curves, plot_pattern
from .io import PATTERN_HEADER, read_pattern_table, read_sweep_table

# short metric names accepted alongside the CSV column names
METRIC_ALIASES = {
    "td": "td_deg",
    "d_target": "d_target_db",
    "d_actual": "d_actual_db",
    "sll": "sll_db",
    "sll_max": "sll_max_db",
    "sla": "sla_db",
    "hpbw": "hpbw_deg",
}


class UsageError(Exception):
    """Bad invocation; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); keep our contract
        raise UsageError(message)


def _parse_pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"{flag} expects two comma-separated numbers")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="msplot", description="Render figures from simulator CSVs.")
    parser.add_argument(
        "--version", action="version", version=f"msplot {__version__}"
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("pattern", help="far-field heatmap from a pattern CSV")
    p.add_argument("csv", help="pattern CSV path")
    p.add_argument("-o", "--output", required=True, help="image path (.png or .svg)")
    p.add_argument("--db-range", default="-30,0", help="color range 'lo,hi' in dB")
    p.add_argument("--target", help="mark a steering direction 'theta,phi'")
    p.add_argument(
        "--dump-table", action="store_true", help="echo the plotted rows to stdout"
    )

    c = sub.add_parser("curves", help="metric-vs-rate curves from a sweep CSV")
    c.add_argument("csv", help="sweep CSV path")
    c.add_argument("--metric", required=True, help="metric column (or short alias)")
    c.add_argument("-o", "--output", required=True, help="image path (.png or .svg)")
    c.add_argument(
        "--dump-table", action="store_true", help="echo the plotted rows to stdout"
    )
    return parser


def _cmd_pattern(args) -> int:
    spec = FigureSpec(
        input_path=args.csv,
        kind="heatmap",
        output_path=args.output,
        db_range=_parse_pair(args.db_range, "--db-range"),
        target=_parse_pair(args.target, "--target") if args.target else None,
    )
    table = read_pattern_table(args.csv)
    plot_pattern(spec, table)
    if args.dump_table:
        print(PATTERN_HEADER)
        for row in table.raw_rows:
            print(row)
    return 0


def _cmd_curves(args) -> int:
    metric = METRIC_ALIASES.get(args.metric, args.metric)
    spec = FigureSpec(
        input_path=args.csv, kind="curves", output_path=args.output, metric=metric
    )
    table = read_sweep_table(args.csv)
    plot_curves(spec, table)
    if args.dump_table:
        print(table.header)
        for row in table.select(metric):
            print(row.raw)
    return 0


_VALUE_FLAGS = ("--db-range", "--target")


def _attach_values(argv: list[str]) -> list[str]:
    """Join value flags with '='; argparse reads '-20,0' as a flag otherwise."""
    out: list[str] = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            skip = True
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_attach_values(list(argv)))
        if args.command == "pattern":
            return _cmd_pattern(args)
        if args.command == "curves":
            return _cmd_curves(args)
        raise UsageError("a command is required (pattern or curves)")
    except UsageError as exc:
        print(f"msplot: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"msplot: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --version / --help
        return int(exc.code or 0)
    except Exception as exc:
        print(f"msplot: failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
