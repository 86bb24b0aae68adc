"""Programmable-metasurface beam steering under unit-cell faults.

The package models a reflective coding metasurface as a grid of
discrete-state unit cells, computes its scalar far-field pattern,
injects parametric fault scenarios into the coding and quantifies the
damage with beam metrics, individually or across Monte-Carlo sweeps.

Typical flow::

    geometry = MetasurfaceGeometry.from_frequency(15, 15, 4e-3, 25e9)
    target = SteeringTarget(45.0, 45.0)
    coding = generate_coding(geometry, target, default_palette())
    grid = ReflectionGrid.from_coding(coding, default_palette())
    pattern = evaluate_pattern(grid, AngularGrid.survey())
    report = analyze_pattern(pattern, target, field_fn=field_fn_for(grid))
"""

from ._rng import derive_seed, generator_for
from .coding import (
    SPEED_OF_LIGHT,
    CodingGrid,
    MetasurfaceGeometry,
    SteeringTarget,
    generate_coding,
    load_coding,
    required_phase,
    required_phase_grid,
    save_coding,
)
from .farfield import (
    DB_FLOOR,
    AngularGrid,
    FarFieldPattern,
    ReflectionGrid,
    evaluate_pattern,
    field_at,
    field_fn_for,
    field_many,
    read_pattern_csv,
    to_db,
    write_pattern_csv,
)
from .faults import (
    TABLE1_ACRONYMS,
    Aligned,
    Biased,
    Clustered,
    Deterministic,
    ErrorScenario,
    FaultMask,
    Independent,
    OutOfState,
    StateSpecific,
    Stuck,
    apply_scenario,
    build_fault_mask,
    faulty_cell_count,
    parse_scenario_acronym,
    select_faulty_cells,
)
from .metrics import (
    METRICS_CSV_HEADER,
    Lobe,
    MetricsReport,
    analyze_pattern,
    directivity_at,
    great_circle_deg,
    hpbw,
    segment_lobes,
    sla,
    sll,
    target_deviation,
)
from .palette import (
    StatePalette,
    UnitCellResponse,
    circular_phase_distance,
    default_palette,
    load_palette,
    save_palette,
)
from .sweep import (
    SummaryRow,
    SweepPlan,
    SweepResult,
    TrialRow,
    aggregate,
    build_scenario,
    golden_reference,
    run_sweep,
    write_manifest,
    write_sweep_csv,
    write_trials_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # palette
    "UnitCellResponse",
    "StatePalette",
    "circular_phase_distance",
    "default_palette",
    "load_palette",
    "save_palette",
    # coding
    "SPEED_OF_LIGHT",
    "MetasurfaceGeometry",
    "SteeringTarget",
    "CodingGrid",
    "required_phase",
    "required_phase_grid",
    "generate_coding",
    "save_coding",
    "load_coding",
    # far field
    "DB_FLOOR",
    "ReflectionGrid",
    "AngularGrid",
    "FarFieldPattern",
    "field_at",
    "field_many",
    "field_fn_for",
    "evaluate_pattern",
    "to_db",
    "write_pattern_csv",
    "read_pattern_csv",
    # faults
    "Stuck",
    "OutOfState",
    "Deterministic",
    "Biased",
    "Independent",
    "Clustered",
    "Aligned",
    "StateSpecific",
    "ErrorScenario",
    "FaultMask",
    "TABLE1_ACRONYMS",
    "faulty_cell_count",
    "select_faulty_cells",
    "build_fault_mask",
    "apply_scenario",
    "parse_scenario_acronym",
    # metrics
    "METRICS_CSV_HEADER",
    "Lobe",
    "MetricsReport",
    "segment_lobes",
    "great_circle_deg",
    "target_deviation",
    "directivity_at",
    "sll",
    "sla",
    "hpbw",
    "analyze_pattern",
    # sweep
    "SweepPlan",
    "TrialRow",
    "SummaryRow",
    "SweepResult",
    "build_scenario",
    "golden_reference",
    "run_sweep",
    "aggregate",
    "write_sweep_csv",
    "write_trials_csv",
    "write_manifest",
    # rng
    "derive_seed",
    "generator_for",
]
