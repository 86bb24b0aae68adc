"""Far-field evaluation of a reflection grid (array-factor model).

The scattered field of the surface under normal plane-wave incidence is

    E(theta, phi) = cos(theta) * sum_{m,n} Gamma_mn
                    * exp(j * (Phi_mn - k0 * zeta_mn(theta, phi)))

    zeta_mn = D_u * sin(theta) * ((m - 1/2) * cos(phi) + (n - 1/2) * sin(phi))

with cell phase centers at half-integer multiples of the pitch and the
cos(theta) cell element factor. Incident-wave constants are absorbed into
normalization (only relative patterns are reported).

Evaluation is factorized per axis: for A angles the cost is O(A * (N*M))
via two thin matrix products instead of a per-angle double sum. The naive
double sum is kept in the test suite as an independent oracle.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .coding import CodingGrid, MetasurfaceGeometry
from .palette import StatePalette

__all__ = [
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
    "DB_FLOOR",
]

DB_FLOOR = -100.0  # dB value substituted for zero magnitude


@dataclass(frozen=True)
class ReflectionGrid:
    """Realized complex response per cell: amplitude and phase arrays.

    Rows follow the n index (paired with sin(phi) in zeta), columns the
    m index (paired with cos(phi)). Invalid *states* are representable
    (arbitrary phases), invalid amplitudes are not: gamma must be in [0, 1].
    """

    geometry: MetasurfaceGeometry
    gamma: np.ndarray
    phase_deg: np.ndarray

    def __post_init__(self) -> None:
        shape = (self.geometry.n_rows, self.geometry.n_cols)
        gamma = np.asarray(self.gamma, dtype=float)
        phase = np.asarray(self.phase_deg, dtype=float)
        if gamma.shape != shape or phase.shape != shape:
            raise ValueError(f"cell arrays must have shape {shape}")
        if gamma.min() < 0.0 or gamma.max() > 1.0:
            raise ValueError("gamma outside [0, 1]")
        gamma = gamma.copy()
        phase = phase.copy()
        gamma.setflags(write=False)
        phase.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "phase_deg", phase)

    @classmethod
    def from_coding(cls, coding: CodingGrid, palette: StatePalette) -> "ReflectionGrid":
        gammas = np.array([s.gamma for s in palette.states])
        phases = np.array([s.phi_deg for s in palette.states])
        return cls(coding.geometry, gammas[coding.cells], phases[coding.cells])

    def response(self) -> np.ndarray:
        """Complex per-cell response Gamma * exp(j*Phi)."""
        return self.gamma * np.exp(1j * np.deg2rad(self.phase_deg))


def _uniform_ascending(values: np.ndarray, name: str, lo: float, hi: float) -> None:
    if values.ndim != 1 or len(values) == 0:
        raise ValueError(f"{name} samples must be a non-empty 1-D array")
    if values.min() < lo or values.max() > hi:
        raise ValueError(f"{name} samples outside [{lo}, {hi}]")
    if len(values) > 1:
        steps = np.diff(values)
        if steps.min() <= 0:
            raise ValueError(f"{name} samples must be strictly ascending")
        if not np.allclose(steps, steps[0], rtol=0, atol=1e-9):
            raise ValueError(f"{name} samples must be uniformly spaced")


@dataclass(frozen=True)
class AngularGrid:
    """Uniform sampling of the upper hemisphere, degrees.

    theta ascends within [0, 90], phi within [0, 360) (cyclic axis).
    """

    theta_deg: np.ndarray
    phi_deg: np.ndarray

    def __post_init__(self) -> None:
        th = np.asarray(self.theta_deg, dtype=float)
        ph = np.asarray(self.phi_deg, dtype=float)
        _uniform_ascending(th, "theta", 0.0, 90.0)
        _uniform_ascending(ph, "phi", 0.0, 360.0 - 1e-12)
        th = th.copy()
        ph = ph.copy()
        th.setflags(write=False)
        ph.setflags(write=False)
        object.__setattr__(self, "theta_deg", th)
        object.__setattr__(self, "phi_deg", ph)

    @classmethod
    def survey(cls, step_deg: float = 1.0) -> "AngularGrid":
        """Default full-hemisphere grid, 1 degree per axis."""
        return cls(
            np.arange(0.0, 90.0 + step_deg / 2, step_deg),
            np.arange(0.0, 360.0, step_deg),
        )

    @property
    def theta_step(self) -> float:
        return float(self.theta_deg[1] - self.theta_deg[0]) if len(self.theta_deg) > 1 else 0.0

    @property
    def phi_step(self) -> float:
        return float(self.phi_deg[1] - self.phi_deg[0]) if len(self.phi_deg) > 1 else 0.0


@dataclass(frozen=True)
class FarFieldPattern:
    """|E| sampled on an angular grid, plus the linear magnitude used as 0 dB."""

    grid: AngularGrid
    magnitude: np.ndarray
    reference_peak: float

    def __post_init__(self) -> None:
        mag = np.asarray(self.magnitude, dtype=float)
        shape = (len(self.grid.theta_deg), len(self.grid.phi_deg))
        if mag.shape != shape:
            raise ValueError(f"magnitude shape {mag.shape} does not match grid {shape}")
        if mag.min() < 0:
            raise ValueError("magnitude must be non-negative")
        if self.reference_peak <= 0:
            raise ValueError("reference peak must be positive")
        mag = mag.copy()
        mag.setflags(write=False)
        object.__setattr__(self, "magnitude", mag)
        object.__setattr__(self, "reference_peak", float(self.reference_peak))


def _field_flat(grid: ReflectionGrid, theta_rad: np.ndarray, phi_rad: np.ndarray) -> np.ndarray:
    """Complex field at flattened angle lists (radians). Fixed evaluation order."""
    geo = grid.geometry
    k0du = geo.wavenumber * geo.cell_size_m
    st = np.sin(theta_rad)
    u = st * np.cos(phi_rad)
    v = st * np.sin(phi_rad)
    m_half = np.arange(1, geo.n_cols + 1, dtype=float) - 0.5
    n_half = np.arange(1, geo.n_rows + 1, dtype=float) - 0.5
    x = np.exp(-1j * k0du * np.outer(u, m_half))  # (A, M)
    y = np.exp(-1j * k0du * np.outer(v, n_half))  # (A, N)
    c = grid.response()  # (N, M)
    z = c @ x.T  # (N, A): per-row partial sums over m
    e = np.einsum("an,na->a", y, z)  # sum over n
    return e * np.cos(theta_rad)


def field_at(grid: ReflectionGrid, theta_deg: float, phi_deg: float) -> complex:
    """Complex field value at a single direction. theta must lie in [0, 90]."""
    if not 0.0 <= theta_deg <= 90.0:
        raise ValueError(f"theta out of [0, 90]: {theta_deg}")
    th = np.deg2rad(np.array([float(theta_deg)]))
    ph = np.deg2rad(np.array([float(phi_deg)]))
    return complex(_field_flat(grid, th, ph)[0])


def field_many(grid: ReflectionGrid, theta_deg, phi_deg) -> np.ndarray:
    """Complex field at paired angle arrays (degrees), vectorized."""
    th = np.deg2rad(np.atleast_1d(np.asarray(theta_deg, dtype=float)))
    ph = np.deg2rad(np.atleast_1d(np.asarray(phi_deg, dtype=float)))
    if th.shape != ph.shape:
        raise ValueError("theta and phi arrays must have the same shape")
    if len(th) and (th.min() < 0.0 or th.max() > np.pi / 2):
        raise ValueError("theta out of [0, 90]")
    return _field_flat(grid, th.reshape(-1), ph.reshape(-1)).reshape(th.shape)


def field_fn_for(grid: ReflectionGrid):
    """Vectorized (theta_deg, phi_deg) -> complex field closure for metrics."""
    return lambda theta_deg, phi_deg: field_many(grid, theta_deg, phi_deg)


def evaluate_pattern(
    grid: ReflectionGrid,
    angular: AngularGrid | None = None,
    reference_peak: float | None = None,
) -> FarFieldPattern:
    """|E| over the angular grid. Reference defaults to the pattern's own max."""
    if angular is None:
        angular = AngularGrid.survey()
    th = np.deg2rad(angular.theta_deg)
    ph = np.deg2rad(angular.phi_deg)
    tt = np.repeat(th, len(ph))
    pp = np.tile(ph, len(th))
    mag = np.abs(_field_flat(grid, tt, pp)).reshape(len(th), len(ph))
    ref = float(mag.max()) if reference_peak is None else float(reference_peak)
    return FarFieldPattern(angular, mag, ref)


def to_db(
    pattern: FarFieldPattern,
    reference: float | None = None,
    floor_db: float = DB_FLOOR,
) -> np.ndarray:
    """20*log10(magnitude/reference); zero magnitudes clamp to floor_db."""
    ref = pattern.reference_peak if reference is None else float(reference)
    if ref <= 0:
        raise ValueError("reference must be positive")
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(pattern.magnitude / ref)
    return np.maximum(db, floor_db)


def write_pattern_csv(pattern: FarFieldPattern, path) -> None:
    """Row-major pattern dump with the normalization recorded in a comment."""
    db = to_db(pattern)
    buf = io.StringIO()
    buf.write("# mssim pattern v1\n")
    buf.write(f"# reference_peak = {float(pattern.reference_peak)!r}\n")
    buf.write("theta_deg,phi_deg,magnitude,db\n")
    for i, t in enumerate(pattern.grid.theta_deg):
        for j, p in enumerate(pattern.grid.phi_deg):
            buf.write(
                f"{float(t)!r},{float(p)!r},"
                f"{float(pattern.magnitude[i, j])!r},{float(db[i, j])!r}\n"
            )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def read_pattern_csv(path) -> FarFieldPattern:
    reference = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "reference_peak" in line:
                    reference = float(line.split("=", 1)[1])
                continue
            if line.startswith("theta_deg"):
                continue
            parts = line.split(",")
            rows.append((float(parts[0]), float(parts[1]), float(parts[2])))
    if not rows or reference is None:
        raise ValueError(f"malformed pattern CSV {path}")
    thetas = sorted({r[0] for r in rows})
    phis = sorted({r[1] for r in rows})
    grid = AngularGrid(np.array(thetas), np.array(phis))
    mag = np.full((len(thetas), len(phis)), np.nan)
    ti = {t: i for i, t in enumerate(thetas)}
    pj = {p: j for j, p in enumerate(phis)}
    for t, p, m in rows:
        mag[ti[t], pj[p]] = m
    if np.isnan(mag).any():
        raise ValueError(f"pattern CSV {path} does not cover the full grid")
    return FarFieldPattern(grid, mag, reference)
