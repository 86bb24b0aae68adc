"""Matplotlib renderers. Every figure is written as both PNG and SVG."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import PatternTable, SweepTable, read_pattern_table, read_sweep_table

KINDS = ("heatmap", "curves")

METRIC_LABELS = {
    "td_deg": "target deviation (deg)",
    "d_target_db": "level at target direction (dB)",
    "d_actual_db": "level at main lobe (dB)",
    "sll_db": "side-lobe level, nearest (dB)",
    "sll_max_db": "side-lobe level, largest (dB)",
    "sla_db": "side-lobe accumulation (dB)",
    "hpbw_deg": "half-power beamwidth (deg)",
    "n_lobes": "lobe count",
}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw and where to write it."""

    input_path: str
    kind: str
    output_path: str
    db_range: tuple[float, float] = (-30.0, 0.0)
    metric: str | None = None
    target: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        lo, hi = self.db_range
        if not lo < hi:
            raise ValueError("db_range must ascend")
        if self.kind == "curves" and not self.metric:
            raise ValueError("curves figures need a metric")


def _write(fig, output_path) -> tuple[Path, Path]:
    """Save under the requested name plus a sibling in the other format."""
    out = Path(output_path)
    if out.suffix.lower() not in (".png", ".svg"):
        raise ValueError("output must end in .png or .svg")
    sibling = out.with_suffix(".svg" if out.suffix.lower() == ".png" else ".png")
    fig.savefig(out, dpi=160, bbox_inches="tight")
    fig.savefig(sibling, dpi=160, bbox_inches="tight")
    plt.close(fig)
    return out, sibling


def plot_pattern(spec: FigureSpec, table: PatternTable | None = None) -> tuple[Path, Path]:
    """Hemisphere heatmap on (phi, theta) axes with a dB colorbar.

    Marks the strongest sample and, when the spec names one, the steering
    target. Returns the two written paths.
    """
    if table is None:
        table = read_pattern_table(spec.input_path)
    fig, ax = plt.subplots(figsize=(7.0, 3.6))
    mesh = ax.pcolormesh(
        table.phi_deg,
        table.theta_deg,
        table.db,
        shading="nearest",
        vmin=spec.db_range[0],
        vmax=spec.db_range[1],
        cmap="inferno",
    )
    fig.colorbar(mesh, ax=ax, label="relative power (dB)")
    main_t, main_p = table.main_lobe()
    ax.plot(main_p, main_t, "wx", markersize=9, markeredgewidth=2, label="main lobe")
    if spec.target is not None:
        ax.plot(
            spec.target[1], spec.target[0], "c+",
            markersize=11, markeredgewidth=2, label="target",
        )
    ax.set_xlabel("phi (deg)")
    ax.set_ylabel("theta (deg)")
    ax.legend(loc="upper right", fontsize=8, framealpha=0.85)
    return _write(fig, spec.output_path)


def plot_curves(spec: FigureSpec, table: SweepTable | None = None) -> tuple[Path, Path]:
    """One mean line with a +-std band per scenario, metric vs error rate."""
    if table is None:
        table = read_sweep_table(spec.input_path)
    rows = table.select(spec.metric)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for scenario in table.scenarios():
        cells = sorted((r for r in rows if r.scenario == scenario), key=lambda r: r.rate)
        if not cells:
            continue
        x = np.array([r.rate for r in cells])
        mean = np.array([r.mean for r in cells])
        std = np.array([r.std for r in cells])
        (line,) = ax.plot(x, mean, marker="o", markersize=3, label=scenario)
        # nan means/stds (fully flagged cells) leave gaps rather than crash
        ax.fill_between(
            x, mean - std, mean + std,
            alpha=0.2, linewidth=0, color=line.get_color(),
        )
    ax.set_xlabel("error rate")
    ax.set_ylabel(METRIC_LABELS.get(spec.metric, spec.metric))
    ax.grid(True, alpha=0.3)
    ax.legend(title="scenario", fontsize=8)
    return _write(fig, spec.output_path)
