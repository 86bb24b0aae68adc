"""Figure rendering for metasurface simulator result CSVs.

Two figure kinds, both written as PNG and SVG:

- heatmaps of far-field pattern CSVs (`plot_pattern`), with markers at
  the detected main lobe and, optionally, the steering target;
- metric-vs-error-rate curves from sweep CSVs (`plot_curves`), one
  mean +- std band per scenario.

The package consumes only the simulator's public CSV schemas and never
alters the numbers it plots.

>>> from msplot import FigureSpec, plot_pattern
>>> plot_pattern(FigureSpec("pattern.csv", "heatmap", "pattern.png"))
"""

__version__ = "0.1.0"

from .figures import KINDS, METRIC_LABELS, FigureSpec, plot_curves, plot_pattern
from .io import (
    PATTERN_HEADER,
    SWEEP_HEADER,
    PatternTable,
    SweepRow,
    SweepTable,
    read_pattern_table,
    read_sweep_table,
)

__all__ = [
    "__version__",
    "KINDS",
    "METRIC_LABELS",
    "FigureSpec",
    "plot_curves",
    "plot_pattern",
    "PATTERN_HEADER",
    "SWEEP_HEADER",
    "PatternTable",
    "SweepRow",
    "SweepTable",
    "read_pattern_table",
    "read_sweep_table",
]
