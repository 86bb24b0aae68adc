"""Command-line front end.

Subcommands cover the full pipeline: ``code`` writes a coding document,
``pattern`` evaluates a far field (optionally with injected faults),
``inject`` realizes a fault scenario on its own, ``metrics`` analyzes a
pattern CSV, ``sweep`` runs a Monte-Carlo grid and ``golden`` prints the
fault-free reference table.

Exit codes: 0 on success, 1 on usage or value errors, 2 on runtime
failures. Every command that injects faults requires an explicit seed;
there is no silent entropy source. Each run that writes a file also
writes a small manifest next to it.
"""

from __future__ import annotations

import argparse
import sys

import yaml

from . import __version__
from .coding import MetasurfaceGeometry, SteeringTarget, generate_coding, load_coding, save_coding
from .faults import (
    Aligned,
    Biased,
    Clustered,
    Deterministic,
    ErrorScenario,
    Independent,
    OutOfState,
    StateSpecific,
    Stuck,
    apply_scenario,
    build_fault_mask,
    parse_scenario_acronym,
)
from .farfield import (
    AngularGrid,
    ReflectionGrid,
    evaluate_pattern,
    field_fn_for,
    read_pattern_csv,
    write_pattern_csv,
)
from .metrics import METRICS_CSV_HEADER, analyze_pattern
from .palette import UnitCellResponse, default_palette, load_palette
from .sweep import (
    SweepPlan,
    golden_reference,
    run_sweep,
    write_manifest,
    write_sweep_csv,
    write_trials_csv,
)

__all__ = ["main"]

_TYPE_TOKENS = {"stuck": "S", "out": "O", "det": "D", "biased": "B"}
_DIST_TOKENS = {"ind": "I", "clu": "C", "ali": "A", "sta": "S"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; the contract wants 1
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------- construction


def _build_parser() -> _Parser:
    parser = _Parser(prog="mssim", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--version", action="version", version=f"mssim {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_geometry(p):
        p.add_argument("--nx", type=int, default=15, help="cells along x (columns)")
        p.add_argument("--ny", type=int, default=15, help="cells along y (rows)")
        p.add_argument("--pitch-mm", type=float, default=4.0, help="cell pitch in mm")
        p.add_argument("--freq-ghz", type=float, default=25.0, help="design frequency in GHz")
        p.add_argument("--theta", type=float, default=45.0, help="target elevation in degrees")
        p.add_argument("--phi", type=float, default=45.0, help="target azimuth in degrees")
        p.add_argument("--palette", help="palette document (defaults to the 2-bit palette)")

    def add_scenario(p, require_spec=False):
        p.add_argument(
            "--inject",
            metavar="TYPE,DIST,RATE[,seed=N][,delta=K]",
            required=require_spec,
            help="compact scenario spec, e.g. det,clu,0.3,seed=7",
        )
        p.add_argument("--type", choices=sorted(_TYPE_TOKENS), help="error type")
        p.add_argument("--dist", choices=sorted(_DIST_TOKENS), help="spatial distribution")
        p.add_argument("--rate", type=float, help="faulty-cell rate in [0, 1]")
        p.add_argument("--seed", type=int, help="scenario RNG seed")
        p.add_argument("--delta", type=int, default=1, help="state offset for biased errors")
        p.add_argument("--det-gamma", type=float, help="amplitude of the deterministic response")
        p.add_argument("--det-phi", type=float, help="phase of the deterministic response")
        p.add_argument("--cluster-seed", metavar="R,C", help="cluster growth origin cell")
        p.add_argument(
            "--target-states",
            metavar="I[,J...]",
            help="state indices hit by state-specific faults (default 0)",
        )

    p = sub.add_parser("code", help="generate a coding document for a steering target")
    add_geometry(p)
    p.add_argument("-o", "--output", required=True, help="coding document path")
    p.add_argument("--config", help="config document supplying flag defaults")

    p = sub.add_parser("pattern", help="evaluate the far-field pattern of a coding")
    p.add_argument("coding", help="coding document")
    p.add_argument("-o", "--output", required=True, help="pattern CSV path")
    p.add_argument("--step", type=float, default=1.0, help="angular step in degrees")
    add_scenario(p)
    p.add_argument("--metrics", help="also analyze and write a metrics CSV here")
    p.add_argument("--config", help="config document supplying flag defaults")

    p = sub.add_parser("inject", help="realize a fault scenario on a coding")
    p.add_argument("coding", help="coding document")
    p.add_argument("-o", "--output", required=True, help="fault realization document path")
    add_scenario(p, require_spec=False)
    p.add_argument("--pattern", help="also evaluate and write the faulty pattern CSV here")
    p.add_argument("--step", type=float, default=1.0, help="angular step in degrees")
    p.add_argument("--config", help="config document supplying flag defaults")

    p = sub.add_parser("metrics", help="analyze a pattern CSV")
    p.add_argument("pattern", help="pattern CSV")
    p.add_argument("--theta", type=float, required=True, help="target elevation in degrees")
    p.add_argument("--phi", type=float, required=True, help="target azimuth in degrees")
    p.add_argument("-o", "--output", help="metrics CSV path (prints a table regardless)")
    p.add_argument("--scenario", default="NA", help="scenario label for the CSV row")
    p.add_argument("--rate", type=float, default=0.0, help="rate recorded in the CSV row")
    p.add_argument("--trial", type=int, default=0, help="trial index recorded in the CSV row")
    p.add_argument("--floor-db", type=float, default=-30.0, help="lobe floor relative to peak")
    p.add_argument(
        "--sla-convention",
        choices=("integrated", "peak_sum"),
        default="integrated",
        help="side-lobe aggregate convention",
    )
    p.add_argument("--config", help="config document supplying flag defaults")

    p = sub.add_parser("sweep", help="run a Monte-Carlo fault sweep")
    add_geometry(p)
    p.add_argument(
        "--scenarios",
        default="IS,IO,ID,IB,CS,CO,CD,CB",
        help="comma-separated scenario acronyms",
    )
    p.add_argument(
        "--rates",
        default="0:0.5:0.01",
        help="rates as start:stop:step or a comma-separated list",
    )
    p.add_argument("--trials", type=int, default=100, help="trials per (scenario, rate) cell")
    p.add_argument("--seed", type=int, required=True, help="root seed for all substreams")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (output identical for any value)")
    p.add_argument("--delta", type=int, default=1, help="state offset for biased errors")
    p.add_argument("--step", type=float, default=1.0, help="angular step in degrees")
    p.add_argument("-o", "--output", required=True, help="sweep summary CSV path")
    p.add_argument("--trials-csv", help="optional per-trial CSV path")
    p.add_argument("--manifest", help="manifest path (default: <output>.manifest.yaml)")
    p.add_argument("--config", help="config document supplying flag defaults")

    p = sub.add_parser("golden", help="print the fault-free reference metrics table")
    add_geometry(p)
    p.add_argument("--step", type=float, default=1.0, help="angular step in degrees")
    p.add_argument("-o", "--output", help="optional metrics CSV path")
    p.add_argument("--config", help="config document supplying flag defaults")

    return parser


def _apply_config_defaults(parser: _Parser, argv: list[str]) -> list[str]:
    """A config document supplies defaults; explicit flags still win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise UsageError("--config needs a path")
    with open(argv[idx + 1], "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh) or {}
    if not isinstance(doc, dict):
        raise UsageError("config document must be a mapping")
    extra: list[str] = []
    for key, value in doc.items():
        flag = "--" + str(key).replace("_", "-")
        if value is None:
            continue
        extra.extend([flag, str(value)])
    # injected before user flags so later (explicit) occurrences override
    return argv[:1] + extra + argv[1:]


# ---------------------------------------------------------------- scenarios


def _parse_compact_inject(spec: str) -> dict:
    parts = [p.strip() for p in spec.split(",") if p.strip()]
    if len(parts) < 3:
        raise UsageError(f"--inject needs type,dist,rate (got {spec!r})")
    out: dict = {}
    head = parts[0]
    if len(head) == 2 and head.isalpha():
        parse_scenario_acronym(head)
        out["dist"] = {v: k for k, v in _DIST_TOKENS.items()}[head.upper()[0]]
        out["type"] = {v: k for k, v in _TYPE_TOKENS.items()}[head.upper()[1]]
        rest = parts[1:]
    else:
        if head not in _TYPE_TOKENS:
            raise UsageError(f"unknown error type {head!r}")
        if parts[1] not in _DIST_TOKENS:
            raise UsageError(f"unknown distribution {parts[1]!r}")
        out["type"] = head
        out["dist"] = parts[1]
        rest = parts[2:]
    out["rate"] = float(rest[0])
    for extra in rest[1:]:
        if "=" not in extra:
            raise UsageError(f"expected key=value in --inject, got {extra!r}")
        key, value = extra.split("=", 1)
        key = key.strip()
        if key == "seed":
            out["seed"] = int(value)
        elif key == "delta":
            out["delta"] = int(value)
        else:
            raise UsageError(f"unknown --inject option {key!r}")
    return out


def _scenario_from_args(args) -> ErrorScenario | None:
    spec: dict = {}
    if getattr(args, "inject", None):
        spec = _parse_compact_inject(args.inject)
    for key in ("type", "dist", "rate", "seed"):
        value = getattr(args, key, None)
        if value is not None and key not in spec:
            spec[key] = value
    if "type" not in spec and "dist" not in spec and "rate" not in spec:
        return None
    for key in ("type", "dist", "rate"):
        if key not in spec:
            raise UsageError(f"fault injection needs --{key} (or a full --inject spec)")
    if "seed" not in spec:
        raise UsageError("fault injection needs an explicit --seed")

    if spec["type"] == "stuck":
        etype = Stuck()
    elif spec["type"] == "out":
        etype = OutOfState()
    elif spec["type"] == "det":
        value = None
        if args.det_gamma is not None or args.det_phi is not None:
            gamma = args.det_gamma if args.det_gamma is not None else 1.0
            phi = args.det_phi if args.det_phi is not None else 0.0
            value = UnitCellResponse(gamma, phi)
        etype = Deterministic(value)
    else:
        etype = Biased(spec.get("delta", getattr(args, "delta", 1)))

    if spec["dist"] == "ind":
        dist = Independent()
    elif spec["dist"] == "clu":
        seed_cell = None
        if getattr(args, "cluster_seed", None):
            r, c = (int(t) for t in args.cluster_seed.split(","))
            seed_cell = (r, c)
        dist = Clustered(seed_cell)
    elif spec["dist"] == "ali":
        dist = Aligned()
    else:
        states = frozenset({0})
        if getattr(args, "target_states", None):
            states = frozenset(int(t) for t in args.target_states.split(","))
        dist = StateSpecific(states)

    return ErrorScenario(etype, dist, float(spec["rate"]), int(spec["seed"]))


def _parse_rates(text: str) -> tuple[float, ...]:
    if ":" in text:
        start, stop, step = (float(t) for t in text.split(":"))
        if step <= 0:
            raise UsageError("rate step must be positive")
        n = int(round((stop - start) / step))
        return tuple(round(start + i * step, 10) for i in range(n + 1))
    return tuple(float(t) for t in text.split(","))


# ----------------------------------------------------------------- commands


def _geometry_from_args(args):
    geometry = MetasurfaceGeometry.from_frequency(
        args.ny, args.nx, args.pitch_mm * 1e-3, args.freq_ghz * 1e9
    )
    target = SteeringTarget(args.theta, args.phi)
    palette = load_palette(args.palette) if args.palette else default_palette()
    return geometry, target, palette


def _write_run_manifest(output_path: str, command: str, detail: dict) -> None:
    doc = {"tool": {"name": "mssim", "version": __version__}, "command": command}
    doc.update(detail)
    with open(f"{output_path}.manifest.yaml", "w", encoding="utf-8") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def _cmd_code(args) -> int:
    geometry, target, palette = _geometry_from_args(args)
    coding = generate_coding(geometry, target, palette)
    save_coding(coding, palette, args.output)
    _write_run_manifest(
        args.output,
        "code",
        {
            "target": {"theta_deg": target.theta_deg, "phi_deg": target.phi_deg},
            "shape": [geometry.n_rows, geometry.n_cols],
        },
    )
    print(f"wrote {geometry.n_rows}x{geometry.n_cols} coding to {args.output}")
    return 0


def _cmd_pattern(args) -> int:
    coding, palette = load_coding(args.coding)
    target = coding.target
    scenario = _scenario_from_args(args)
    if scenario is None:
        grid = ReflectionGrid.from_coding(coding, palette)
    else:
        grid = apply_scenario(coding, palette, scenario)
    angular = AngularGrid.survey(args.step)
    pattern = evaluate_pattern(grid, angular)
    write_pattern_csv(pattern, args.output)
    detail = {"coding": args.coding, "step_deg": args.step}
    if scenario is not None:
        detail["scenario"] = {
            "type": type(scenario.error_type).__name__,
            "distribution": type(scenario.distribution).__name__,
            "rate": scenario.rate,
            "seed": scenario.rng_seed,
        }
    _write_run_manifest(args.output, "pattern", detail)
    print(f"wrote {pattern.magnitude.size}-sample pattern to {args.output}")
    if args.metrics:
        report = analyze_pattern(pattern, target, field_fn=field_fn_for(grid))
        with open(args.metrics, "w", encoding="utf-8", newline="") as fh:
            fh.write(METRICS_CSV_HEADER + "\n")
            rate = scenario.rate if scenario is not None else 0.0
            fh.write(f"NA,{rate!r},0," + ",".join(report.csv_fields()) + "\n")
        print(f"wrote metrics to {args.metrics}")
    return 0


def _cmd_inject(args) -> int:
    coding, palette = load_coding(args.coding)
    scenario = _scenario_from_args(args)
    if scenario is None:
        raise UsageError("inject needs a scenario (--inject or --type/--dist/--rate/--seed)")
    mask = build_fault_mask(coding, palette, scenario)
    doc = {
        "kind": "mssim-fault-realization",
        "version": 1,
        "source": args.coding,
        "scenario": {
            "type": type(scenario.error_type).__name__,
            "distribution": type(scenario.distribution).__name__,
            "rate": scenario.rate,
            "seed": scenario.rng_seed,
        },
        "emergent_rate": mask.emergent_rate,
        "cells": [
            {
                "row": int(r),
                "col": int(c),
                "gamma": float(mask.gamma[r, c]),
                "phi_deg": float(mask.phase_deg[r, c]),
            }
            for r, c in mask.positions
        ],
    }
    with open(args.output, "w", encoding="utf-8") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)
    _write_run_manifest(args.output, "inject", {"emergent_rate": mask.emergent_rate})
    print(f"realized {len(doc['cells'])} faulty cells (rate {mask.emergent_rate:.4f})")
    if args.pattern:
        grid = apply_scenario(coding, palette, scenario)
        pattern = evaluate_pattern(grid, AngularGrid.survey(args.step))
        write_pattern_csv(pattern, args.pattern)
        print(f"wrote faulty pattern to {args.pattern}")
    return 0


def _format_report_table(report) -> str:
    lines = [
        f"{'metric':<14}{'value':>12}",
        f"{'td_deg':<14}{report.td_deg:>12.4f}",
        f"{'d_target_db':<14}{report.d_target_db:>12.4f}",
        f"{'d_actual_db':<14}{report.d_actual_db:>12.4f}",
        f"{'sll_db':<14}{report.sll_db:>12.4f}",
        f"{'sll_max_db':<14}{report.sll_max_db:>12.4f}",
        f"{'sla_db':<14}{report.sla_db:>12.4f}",
        f"{'hpbw_deg':<14}{report.hpbw_deg:>12.4f}",
        f"{'n_lobes':<14}{report.n_lobes:>12d}",
        f"{'flags':<14}{';'.join(report.flags) or '-':>12}",
    ]
    return "\n".join(lines)


def _cmd_metrics(args) -> int:
    pattern = read_pattern_csv(args.pattern)
    target = SteeringTarget(args.theta, args.phi)
    report = analyze_pattern(
        pattern,
        target,
        floor_db=args.floor_db,
        sla_convention=args.sla_convention,
    )
    print(_format_report_table(report))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(METRICS_CSV_HEADER + "\n")
            fh.write(
                f"{args.scenario},{args.rate!r},{args.trial},"
                + ",".join(report.csv_fields())
                + "\n"
            )
        _write_run_manifest(args.output, "metrics", {"pattern": args.pattern})
    return 0


def _cmd_sweep(args) -> int:
    geometry, target, palette = _geometry_from_args(args)
    scenarios = tuple(s.strip().upper() for s in args.scenarios.split(",") if s.strip())
    plan = SweepPlan(
        scenarios=scenarios,
        rates=_parse_rates(args.rates),
        trials=args.trials,
        root_seed=args.seed,
        geometry=geometry,
        target=target,
        palette=palette,
        grid_step_deg=args.step,
        biased_delta=args.delta,
        keep_trials=bool(args.trials_csv),
    )
    result = run_sweep(plan, jobs=args.jobs)
    write_sweep_csv(result, args.output)
    if args.trials_csv:
        write_trials_csv(result, args.trials_csv)
    manifest_path = args.manifest or f"{args.output}.manifest.yaml"
    write_manifest(result, manifest_path, __version__)
    errored = sum(1 for row in result.trial_rows if row.error is not None)
    print(
        f"swept {len(plan.scenarios)} scenarios x {len(plan.rates)} rates x "
        f"{plan.trials} trials in {result.wall_seconds:.1f}s -> {args.output}"
    )
    if errored:
        print(f"error: {errored} trial(s) failed; see flags", file=sys.stderr)
        return 2
    return 0


def _cmd_golden(args) -> int:
    geometry, target, palette = _geometry_from_args(args)
    plan = SweepPlan(
        scenarios=("ID",),
        rates=(0.0,),
        trials=1,
        root_seed=0,
        geometry=geometry,
        target=target,
        palette=palette,
        grid_step_deg=args.step,
        refine="all",
    )
    _, _, report = golden_reference(plan)
    main_lobe = report.lobes[0]
    print(
        f"golden reference ({geometry.n_rows}x{geometry.n_cols}, "
        f"target {target.theta_deg:g}/{target.phi_deg:g} deg)"
    )
    print(f"{'main_lobe':<14}({main_lobe.peak_theta_deg:.2f}, {main_lobe.peak_phi_deg:.2f}) deg")
    print(_format_report_table(report))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(METRICS_CSV_HEADER + "\n")
            fh.write("GOLD,0.0,0," + ",".join(report.csv_fields()) + "\n")
        _write_run_manifest(args.output, "golden", {})
    return 0


_COMMANDS = {
    "code": _cmd_code,
    "pattern": _cmd_pattern,
    "inject": _cmd_inject,
    "metrics": _cmd_metrics,
    "sweep": _cmd_sweep,
    "golden": _cmd_golden,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config_defaults(parser, argv)
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --version / --help
        code = exc.code
        return 0 if code is None else int(code)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
