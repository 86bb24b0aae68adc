"""Phase-gradient coding of a steering metasurface.

For a target reflection direction the surface needs a linear phase ramp
across its cells; each cell then snaps to the nearest palette state.
The required per-cell phase is

    Phi(m, n) = (360 / lambda0) * D_u * sin(theta_r)
                * (m * cos(phi_r) + n * sin(phi_r))    (mod 360)

with 1-based cell indices m (x axis) and n (y axis). Geometry and target
are plain data; coding generation is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .palette import StatePalette, UnitCellResponse, circular_phase_distance

__all__ = [
    "SPEED_OF_LIGHT",
    "MetasurfaceGeometry",
    "SteeringTarget",
    "CodingGrid",
    "required_phase",
    "required_phase_grid",
    "generate_coding",
    "save_coding",
    "load_coding",
]

SPEED_OF_LIGHT = 299_792_458.0  # m/s


@dataclass(frozen=True)
class MetasurfaceGeometry:
    """Planar grid of square cells.

    Parameters
    ----------
    n_rows, n_cols : int
        Cell counts N (y axis, index n) and M (x axis, index m).
    cell_size_m : float
        Cell pitch D_u in meters.
    wavelength_m : float
        Operating wavelength lambda0 in meters.
    """

    n_rows: int
    n_cols: int
    cell_size_m: float
    wavelength_m: float

    def __post_init__(self) -> None:
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError("grid must have at least one cell per axis")
        if self.cell_size_m <= 0 or self.wavelength_m <= 0:
            raise ValueError("cell size and wavelength must be positive")

    @classmethod
    def from_frequency(
        cls, n_rows: int, n_cols: int, cell_size_m: float, frequency_hz: float
    ) -> "MetasurfaceGeometry":
        if frequency_hz <= 0:
            raise ValueError("frequency must be positive")
        return cls(n_rows, n_cols, cell_size_m, SPEED_OF_LIGHT / frequency_hz)

    @property
    def wavenumber(self) -> float:
        """k0 = 2*pi/lambda0, rad/m."""
        return 2.0 * np.pi / self.wavelength_m


@dataclass(frozen=True)
class SteeringTarget:
    """Intended reflection direction, degrees. theta in [0, 90), phi in [0, 360)."""

    theta_deg: float
    phi_deg: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta_deg < 90.0:
            raise ValueError(f"target theta out of [0, 90): {self.theta_deg}")
        if not 0.0 <= self.phi_deg < 360.0:
            raise ValueError(f"target phi out of [0, 360): {self.phi_deg}")


@dataclass(frozen=True)
class CodingGrid:
    """Palette-state index per cell, row n by column m, plus its provenance."""

    geometry: MetasurfaceGeometry
    target: SteeringTarget
    cells: np.ndarray  # shape (n_rows, n_cols), integer state indices
    n_states: int

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=np.int64)
        if cells.shape != (self.geometry.n_rows, self.geometry.n_cols):
            raise ValueError(
                f"cell grid shape {cells.shape} does not match geometry "
                f"({self.geometry.n_rows}, {self.geometry.n_cols})"
            )
        if cells.min() < 0 or cells.max() >= self.n_states:
            raise ValueError("cell state index outside palette")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)


def required_phase(
    geometry: MetasurfaceGeometry, target: SteeringTarget, m: int, n: int
) -> float:
    """Required phase at cell (m, n), 1-based indices, degrees in [0, 360)."""
    if not (1 <= m <= geometry.n_cols and 1 <= n <= geometry.n_rows):
        raise ValueError(f"cell index ({m}, {n}) outside grid")
    tr = np.deg2rad(target.theta_deg)
    pr = np.deg2rad(target.phi_deg)
    coeff = 360.0 * geometry.cell_size_m / geometry.wavelength_m
    return float(
        (coeff * np.sin(tr) * (m * np.cos(pr) + n * np.sin(pr))) % 360.0
    )


def required_phase_grid(
    geometry: MetasurfaceGeometry, target: SteeringTarget
) -> np.ndarray:
    """Required phases for every cell, shape (n_rows, n_cols), degrees."""
    tr = np.deg2rad(target.theta_deg)
    pr = np.deg2rad(target.phi_deg)
    coeff = 360.0 * geometry.cell_size_m / geometry.wavelength_m
    m = np.arange(1, geometry.n_cols + 1, dtype=float)[None, :]
    n = np.arange(1, geometry.n_rows + 1, dtype=float)[:, None]
    return (coeff * np.sin(tr) * (m * np.cos(pr) + n * np.sin(pr))) % 360.0


def generate_coding(
    geometry: MetasurfaceGeometry, target: SteeringTarget, palette: StatePalette
) -> CodingGrid:
    """Snap the required phase profile to the nearest palette state per cell.

    Ties at exactly equidistant phases resolve to the lower state index.
    """
    req = required_phase_grid(geometry, target)
    phases = np.array([s.phi_deg for s in palette.states])
    d = np.abs(req[..., None] - phases[None, None, :]) % 360.0
    d = np.minimum(d, 360.0 - d)
    # argmin returns the first minimum, which is the lower index on ties
    cells = np.argmin(d, axis=-1)
    return CodingGrid(geometry, target, cells, n_states=len(palette))


def save_coding(coding: CodingGrid, palette: StatePalette, path) -> None:
    """Write a self-contained coding document (YAML). Round-trips losslessly."""
    doc = {
        "geometry": {
            "n_rows": coding.geometry.n_rows,
            "n_cols": coding.geometry.n_cols,
            "cell_size_m": coding.geometry.cell_size_m,
            "wavelength_m": coding.geometry.wavelength_m,
        },
        "target": {
            "theta_deg": coding.target.theta_deg,
            "phi_deg": coding.target.phi_deg,
        },
        "palette": [
            {"label": lab, "gamma": s.gamma, "phi_deg": s.phi_deg}
            for lab, s in zip(palette.labels, palette.states)
        ],
        "cells": coding.cells.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def load_coding(path) -> tuple[CodingGrid, StatePalette]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    try:
        geo = MetasurfaceGeometry(**doc["geometry"])
        target = SteeringTarget(**doc["target"])
        palette = StatePalette(
            states=tuple(
                UnitCellResponse(r["gamma"], r["phi_deg"]) for r in doc["palette"]
            ),
            labels=tuple(str(r["label"]) for r in doc["palette"]),
        )
        cells = np.array(doc["cells"], dtype=np.int64)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed coding document {path}") from exc
    return CodingGrid(geo, target, cells, n_states=len(palette)), palette
