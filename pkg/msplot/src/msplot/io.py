"""Readers for the simulator's two public CSV schemas.

Pattern CSVs carry a hemisphere magnitude map; sweep CSVs carry
per-(scenario, rate, metric) statistics. Both tables retain the
verbatim data lines they were parsed from, so dump modes can echo
rows exactly as read and plotting can never alter numeric data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

PATTERN_HEADER = "theta_deg,phi_deg,magnitude,db"
SWEEP_HEADER = "scenario,rate,metric,mean,std,min,max,n,flagged"


@dataclass(frozen=True)
class PatternTable:
    """Far-field samples on a complete theta x phi grid."""

    theta_deg: np.ndarray
    phi_deg: np.ndarray
    magnitude: np.ndarray  # shape (len(theta), len(phi))
    db: np.ndarray
    reference_peak: float
    raw_rows: tuple[str, ...] = field(repr=False, default=())

    def main_lobe(self) -> tuple[float, float]:
        """Direction of the strongest sample, (theta, phi) in degrees."""
        i, j = np.unravel_index(int(np.argmax(self.magnitude)), self.magnitude.shape)
        return float(self.theta_deg[i]), float(self.phi_deg[j])


def read_pattern_table(path) -> PatternTable:
    """Parse a pattern CSV. Raises ValueError on any schema violation."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    reference = None
    header_seen = False
    rows: list[str] = []
    for line in lines:
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line.lstrip("# ").partition("=")
            if key.strip() == "reference_peak":
                try:
                    reference = float(value)
                except ValueError as exc:
                    raise ValueError(f"bad reference_peak comment: {line!r}") from exc
            continue
        if not header_seen:
            if line.strip() != PATTERN_HEADER:
                raise ValueError(f"expected header {PATTERN_HEADER!r}, got {line!r}")
            header_seen = True
            continue
        rows.append(line)
    if reference is None:
        raise ValueError("missing '# reference_peak = <value>' comment")
    if reference <= 0.0:
        raise ValueError("reference_peak must be positive")
    if not header_seen or not rows:
        raise ValueError("pattern CSV holds no samples")

    data = np.empty((len(rows), 4))
    for k, line in enumerate(rows):
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"data row {k + 1}: expected 4 fields, got {len(parts)}")
        try:
            data[k] = [float(v) for v in parts]
        except ValueError as exc:
            raise ValueError(f"data row {k + 1}: {exc}") from exc

    theta = np.unique(data[:, 0])
    phi = np.unique(data[:, 1])
    if len(theta) * len(phi) != len(rows):
        raise ValueError("samples do not form a complete theta x phi grid")
    # row-major sample order is part of the schema; the reshape relies on it
    if not np.array_equal(data[:, 0], np.repeat(theta, len(phi))) or not np.array_equal(
        data[:, 1], np.tile(phi, len(theta))
    ):
        raise ValueError("samples are not in row-major grid order")
    shape = (len(theta), len(phi))
    return PatternTable(
        theta, phi, data[:, 2].reshape(shape), data[:, 3].reshape(shape),
        float(reference), tuple(rows),
    )


@dataclass(frozen=True)
class SweepRow:
    """One aggregated statistic from a sweep CSV."""

    scenario: str
    rate: float
    metric: str
    mean: float
    std: float
    min: float
    max: float
    n: int
    flagged: int
    raw: str = field(repr=False, default="")


@dataclass(frozen=True)
class SweepTable:
    """All rows of a sweep CSV, in file order."""

    rows: tuple[SweepRow, ...]
    header: str = SWEEP_HEADER

    def metrics(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.metric for r in self.rows))

    def scenarios(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.scenario for r in self.rows))

    def select(self, metric: str) -> tuple[SweepRow, ...]:
        """Rows of one metric, file order. Unknown names raise ValueError."""
        if metric not in self.metrics():
            raise ValueError(
                f"unknown metric {metric!r}; available: {', '.join(self.metrics())}"
            )
        return tuple(r for r in self.rows if r.metric == metric)


def read_sweep_table(path) -> SweepTable:
    """Parse a sweep CSV. Raises ValueError on any schema violation."""
    lines = [l for l in Path(path).read_text(encoding="utf-8").splitlines() if l.strip()]
    if not lines or lines[0] != SWEEP_HEADER:
        raise ValueError(f"expected header {SWEEP_HEADER!r}")
    rows = []
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 9:
            raise ValueError(f"line {k}: expected 9 fields, got {len(parts)}")
        try:
            rows.append(
                SweepRow(
                    scenario=parts[0],
                    rate=float(parts[1]),
                    metric=parts[2],
                    mean=float(parts[3]),
                    std=float(parts[4]),
                    min=float(parts[5]),
                    max=float(parts[6]),
                    n=int(parts[7]),
                    flagged=int(parts[8]),
                    raw=line,
                )
            )
        except ValueError as exc:
            raise ValueError(f"line {k}: {exc}") from exc
    if not rows:
        raise ValueError("sweep CSV holds no rows")
    return SweepTable(tuple(rows), lines[0])
