"""Monte-Carlo robustness sweeps over (scenario, rate, trial) grids.

Each cell of the grid applies a freshly seeded fault scenario to the
same golden coding, evaluates the far field and extracts metrics
normalized to the fault-free reference peak. Every trial derives its
own RNG substream from (root seed, scenario acronym, rate index, trial
index), so results are identical for any worker count and any
execution order.

Aggregation reports sample mean, std (0 for a single trial), min, max
and the flagged-trial count per metric. Trials whose flags make a
metric meaningless (capped widths, single-lobe patterns) stay in the
output but drop out of that metric's mean.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import yaml

from ._rng import derive_seed
from .coding import CodingGrid, MetasurfaceGeometry, SteeringTarget, generate_coding
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
    TABLE1_ACRONYMS,
    apply_scenario,
    parse_scenario_acronym,
)
from .farfield import AngularGrid, FarFieldPattern, evaluate_pattern, field_fn_for
from .metrics import METRICS_CSV_HEADER, MetricsReport, analyze_pattern
from .palette import StatePalette, default_palette

__all__ = [
    "SweepPlan",
    "TrialRow",
    "SummaryRow",
    "SweepResult",
    "build_scenario",
    "run_sweep",
    "aggregate",
    "write_sweep_csv",
    "write_trials_csv",
    "write_manifest",
    "golden_reference",
]

AGGREGATED_METRICS = (
    "td_deg",
    "d_target_db",
    "d_actual_db",
    "sll_db",
    "sll_max_db",
    "sla_db",
    "hpbw_deg",
    "n_lobes",
)

# flags that invalidate specific metrics in aggregation
_FLAG_EXCLUDES = {
    "hpbw_capped": ("hpbw_deg",),
    "single_lobe": ("sll_db", "sll_max_db", "sla_db"),
    "trial_error": AGGREGATED_METRICS,
}


@dataclass(frozen=True)
class SweepPlan:
    scenarios: tuple[str, ...]
    rates: tuple[float, ...]
    trials: int
    root_seed: int
    geometry: MetasurfaceGeometry
    target: SteeringTarget
    palette: StatePalette = field(default_factory=default_palette)
    grid_step_deg: float = 1.0
    biased_delta: int = 1
    cluster_seed_cell: tuple[int, int] | None = None
    target_states: frozenset[int] = frozenset({0})
    refine: str = "main"
    keep_trials: bool = True

    def __post_init__(self) -> None:
        for acr in self.scenarios:
            parse_scenario_acronym(acr)
        rates = tuple(float(r) for r in self.rates)
        if any(not 0.0 <= r <= 1.0 for r in rates):
            raise ValueError("rates must lie in [0, 1]")
        if list(rates) != sorted(rates):
            raise ValueError("rates must ascend")
        if self.trials < 1:
            raise ValueError("at least one trial per cell")
        object.__setattr__(self, "scenarios", tuple(str(a).upper() for a in self.scenarios))
        object.__setattr__(self, "rates", rates)

    @classmethod
    def reference(
        cls,
        scenarios: tuple[str, ...] = TABLE1_ACRONYMS,
        rate_stop: float = 0.5,
        rate_step: float = 0.01,
        trials: int = 100,
        root_seed: int = 1,
    ) -> "SweepPlan":
        """The default experiment: the eight two-letter scenarios on the
        15x15 reference surface, rates 0..0.5 step 0.01, 100 trials each."""
        n = int(round(rate_stop / rate_step))
        rates = tuple(round(i * rate_step, 10) for i in range(n + 1))
        return cls(
            scenarios=tuple(scenarios),
            rates=rates,
            trials=trials,
            root_seed=root_seed,
            geometry=MetasurfaceGeometry.from_frequency(15, 15, 4e-3, 25e9),
            target=SteeringTarget(45.0, 45.0),
        )


@dataclass(frozen=True)
class TrialRow:
    scenario: str
    rate: float  # emergent rate for state-specific scenarios
    trial: int
    report: MetricsReport | None
    error: str | None = None
    rate_index: int = 0

    def flags(self) -> tuple[str, ...]:
        if self.error is not None:
            return ("trial_error",)
        return self.report.flags


@dataclass(frozen=True)
class SummaryRow:
    scenario: str
    rate: float
    metric: str
    mean: float
    std: float
    min: float
    max: float
    n: int
    flagged: int


@dataclass(frozen=True)
class SweepResult:
    plan: SweepPlan
    summaries: tuple[SummaryRow, ...]
    trial_rows: tuple[TrialRow, ...]
    golden: MetricsReport
    wall_seconds: float


def build_scenario(
    plan: SweepPlan, acronym: str, rate: float, rate_index: int, trial_index: int
) -> ErrorScenario:
    """Concrete scenario for one grid cell, with its derived substream seed."""
    dist_cls, type_cls = parse_scenario_acronym(acronym)
    if dist_cls is Independent:
        dist = Independent()
    elif dist_cls is Clustered:
        dist = Clustered(plan.cluster_seed_cell)
    elif dist_cls is Aligned:
        dist = Aligned()
    else:
        dist = StateSpecific(plan.target_states)
    if type_cls is Stuck:
        etype = Stuck()
    elif type_cls is OutOfState:
        etype = OutOfState()
    elif type_cls is Deterministic:
        etype = Deterministic()
    else:
        etype = Biased(plan.biased_delta)
    seed = derive_seed(plan.root_seed, acronym.upper(), rate_index, trial_index)
    return ErrorScenario(etype, dist, rate, seed)


def golden_reference(
    plan: SweepPlan,
) -> tuple[CodingGrid, FarFieldPattern, MetricsReport]:
    """Fault-free coding, pattern and metrics anchoring the sweep."""
    coding = generate_coding(plan.geometry, plan.target, plan.palette)
    from .farfield import ReflectionGrid

    grid = ReflectionGrid.from_coding(coding, plan.palette)
    angular = AngularGrid.survey(plan.grid_step_deg)
    pattern = evaluate_pattern(grid, angular)
    report = analyze_pattern(
        pattern, plan.target, field_fn=field_fn_for(grid), refine=plan.refine
    )
    return coding, pattern, report


def _run_cell(
    plan: SweepPlan,
    coding: CodingGrid,
    golden_peak: float,
    acronym: str,
    rate: float,
    rate_index: int,
    trial_index: int,
) -> TrialRow:
    scenario = build_scenario(plan, acronym, rate, rate_index, trial_index)
    try:
        grid = apply_scenario(coding, plan.palette, scenario)
        pattern = evaluate_pattern(grid, AngularGrid.survey(plan.grid_step_deg))
        report = analyze_pattern(
            pattern,
            plan.target,
            field_fn=field_fn_for(grid),
            reference=golden_peak,
            refine=plan.refine,
        )
        out_rate = rate
        if isinstance(scenario.distribution, StateSpecific):
            hits = np.isin(coding.cells, list(scenario.distribution.target_states))
            out_rate = float(hits.sum() / hits.size)
        return TrialRow(acronym, out_rate, trial_index, report, rate_index=rate_index)
    except Exception as exc:  # recorded, never dropped silently
        return TrialRow(acronym, rate, trial_index, None, str(exc), rate_index)


def _cell_args(plan, coding, golden_peak):
    for acronym in plan.scenarios:
        for rate_index, rate in enumerate(plan.rates):
            for trial_index in range(plan.trials):
                yield (plan, coding, golden_peak, acronym, rate, rate_index, trial_index)


def run_sweep(plan: SweepPlan, jobs: int = 1) -> SweepResult:
    """Execute the full grid. Output is identical for any jobs value."""
    t0 = time.perf_counter()
    coding, _pattern, golden = golden_reference(plan)
    golden_peak = golden.lobes[0].peak_magnitude

    rows: dict[tuple[str, int, int], TrialRow] = {}
    tasks = []
    for args in _cell_args(plan, coding, golden_peak):
        _, _, _, acronym, rate, rate_index, trial_index = args
        dist_cls, _ = parse_scenario_acronym(acronym)
        if rate == 0.0 and dist_cls is not StateSpecific:
            # nothing injected: every trial equals the golden reference
            rows[(acronym, rate_index, trial_index)] = TrialRow(
                acronym, 0.0, trial_index, golden, rate_index=rate_index
            )
        else:
            tasks.append(args)

    if jobs <= 1:
        results = map(_run_cell_star, tasks)
    else:
        executor = ProcessPoolExecutor(max_workers=jobs)
        results = executor.map(_run_cell_star, tasks, chunksize=16)
    for args, row in zip(tasks, results):
        _, _, _, acronym, _, rate_index, trial_index = args
        rows[(acronym, rate_index, trial_index)] = row
    if jobs > 1:
        executor.shutdown()

    ordered = tuple(
        rows[(acronym, ri, ti)]
        for acronym in plan.scenarios
        for ri in range(len(plan.rates))
        for ti in range(plan.trials)
    )
    summaries = aggregate(plan, ordered)
    return SweepResult(
        plan=plan,
        summaries=summaries,
        trial_rows=ordered if plan.keep_trials else (),
        golden=golden,
        wall_seconds=time.perf_counter() - t0,
    )


def _run_cell_star(args):
    return _run_cell(*args)


def aggregate(plan: SweepPlan, rows: tuple[TrialRow, ...]) -> tuple[SummaryRow, ...]:
    """Order-independent per-(scenario, rate) statistics."""
    groups: dict[tuple[str, int], list[TrialRow]] = {}
    rate_of: dict[tuple[str, int], float] = {}
    for row in rows:
        # group by the planned cell; the published rate is the row's
        # (emergent for state-specific scenarios, requested otherwise)
        key = (row.scenario, row.rate_index)
        groups.setdefault(key, []).append(row)
        rate_of[key] = row.rate
    out = []
    for acronym in plan.scenarios:
        for ri in range(len(plan.rates)):
            group = groups.get((acronym, ri), [])
            if not group:
                continue
            flagged = sum(1 for r in group if r.flags())
            for metric in AGGREGATED_METRICS:
                values = []
                for r in group:
                    if r.report is None:
                        continue
                    if any(
                        metric in _FLAG_EXCLUDES.get(flag, ()) for flag in r.flags()
                    ):
                        continue
                    values.append(float(getattr(r.report, metric)))
                if values:
                    arr = np.asarray(values)
                    mean = float(arr.mean())
                    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
                    lo, hi = float(arr.min()), float(arr.max())
                else:
                    mean = std = lo = hi = float("nan")
                out.append(
                    SummaryRow(
                        scenario=acronym,
                        rate=rate_of[(acronym, ri)],
                        metric=metric,
                        mean=mean,
                        std=std,
                        min=lo,
                        max=hi,
                        n=len(values),
                        flagged=flagged,
                    )
                )
    return tuple(out)


# ------------------------------------------------------------------- output


def write_sweep_csv(result: SweepResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("scenario,rate,metric,mean,std,min,max,n,flagged\n")
        for s in result.summaries:
            fh.write(
                f"{s.scenario},{s.rate!r},{s.metric},{s.mean!r},{s.std!r},"
                f"{s.min!r},{s.max!r},{s.n},{s.flagged}\n"
            )


def write_trials_csv(result: SweepResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(METRICS_CSV_HEADER + "\n")
        for row in result.trial_rows:
            if row.report is None:
                fields = ["nan"] * 7 + ["0", "trial_error"]
            else:
                fields = row.report.csv_fields()
            fh.write(f"{row.scenario},{row.rate!r},{row.trial}," + ",".join(fields) + "\n")


def write_manifest(result: SweepResult, path, version: str) -> None:
    plan = result.plan
    doc = {
        "tool": {"name": "mssim", "version": version},
        "plan": {
            "scenarios": list(plan.scenarios),
            "rates": [float(r) for r in plan.rates],
            "trials": plan.trials,
            "root_seed": plan.root_seed,
            "geometry": {
                "n_rows": plan.geometry.n_rows,
                "n_cols": plan.geometry.n_cols,
                "cell_size_m": plan.geometry.cell_size_m,
                "wavelength_m": plan.geometry.wavelength_m,
            },
            "target": {
                "theta_deg": plan.target.theta_deg,
                "phi_deg": plan.target.phi_deg,
            },
            "grid_step_deg": plan.grid_step_deg,
            "biased_delta": plan.biased_delta,
            "refine": plan.refine,
        },
        "wall_seconds": result.wall_seconds,
        "n_trial_rows": len(result.trial_rows),
    }
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)
