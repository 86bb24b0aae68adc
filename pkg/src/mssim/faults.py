"""Fault-scenario generation and injection.

A scenario combines an error type (what a broken cell does), a spatial
distribution (where broken cells sit), a rate and a seed. Applying it to
a coding yields a ReflectionGrid in which non-faulty cells carry their
coded state's response and faulty cells carry realized fault responses.

Error types
    Stuck          cell holds a uniformly random valid state (possibly the
                   coded one)
    OutOfState     phase uniform in [0, 360), amplitude nominal by default
                   (optionally fixed or uniform in [0, 1])
    Deterministic  every faulty cell shows one fixed response, default the
                   first palette state
    Biased         coded state index shifted by a fixed offset, cyclically

Spatial distributions
    Independent    uniform sample of cells without replacement
    Clustered      compact 4-connected region grown ring by ring from a
                   seed cell (default: grid center), random order per ring
    Aligned        whole rows or columns at random; the last line is
                   truncated from a random end to meet the count
    StateSpecific  every cell coded in one of the target states; ignores
                   the requested rate and reports the emergent one

The faulty-cell count is round-half-up(rate * N * M). One PCG64 stream
drives a whole application: placement draws first, then value draws in
row-major cell order (fixed order keeps results reproducible no matter
how the placement algorithm produced its set).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coding import CodingGrid
from .farfield import ReflectionGrid
from .palette import StatePalette, UnitCellResponse

__all__ = [
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
    "faulty_cell_count",
    "select_faulty_cells",
    "realize_fault",
    "apply_scenario",
    "parse_scenario_acronym",
    "TABLE1_ACRONYMS",
]


# ---------------------------------------------------------------- error types


@dataclass(frozen=True)
class Stuck:
    pass


@dataclass(frozen=True)
class OutOfState:
    """Random invalid phase; amplitude nominal unless configured otherwise."""

    gamma: float | None = None  # fixed amplitude; None = first palette state's
    uniform_gamma: bool = False  # draw amplitude uniformly in [0, 1] instead


@dataclass(frozen=True)
class Deterministic:
    value: UnitCellResponse | None = None  # None = first palette state


@dataclass(frozen=True)
class Biased:
    delta: int = 1


ErrorType = Stuck | OutOfState | Deterministic | Biased


# ------------------------------------------------------- spatial distributions


@dataclass(frozen=True)
class Independent:
    pass


@dataclass(frozen=True)
class Clustered:
    seed_cell: tuple[int, int] | None = None  # (row, col); None = grid center


@dataclass(frozen=True)
class Aligned:
    pass


@dataclass(frozen=True)
class StateSpecific:
    target_states: frozenset[int] = frozenset({0})

    def __post_init__(self) -> None:
        states = frozenset(int(s) for s in self.target_states)
        if not states:
            raise ValueError("StateSpecific needs at least one target state")
        object.__setattr__(self, "target_states", states)


SpatialDistribution = Independent | Clustered | Aligned | StateSpecific


@dataclass(frozen=True)
class ErrorScenario:
    error_type: ErrorType
    distribution: SpatialDistribution
    rate: float
    rng_seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError(f"rate outside [0, 1]: {self.rate}")


@dataclass(frozen=True)
class FaultMask:
    """Faulty-cell positions plus the realized response on each of them."""

    mask: np.ndarray  # bool, (n_rows, n_cols)
    gamma: np.ndarray  # realized amplitude on masked cells, NaN elsewhere
    phase_deg: np.ndarray  # realized phase on masked cells, NaN elsewhere
    emergent_rate: float

    @property
    def positions(self) -> list[tuple[int, int]]:
        return [tuple(p) for p in np.argwhere(self.mask)]


# ----------------------------------------------------------------- operations


def faulty_cell_count(rate: float, n_cells: int) -> int:
    """Nearest-integer cell count, half rounding up."""
    return int(np.floor(rate * n_cells + 0.5))


def _cluster_positions(
    n_rows: int, n_cols: int, seed_cell: tuple[int, int], count: int, rng
) -> list[tuple[int, int]]:
    # ring-by-ring breadth-first growth; ring members are shuffled so only
    # the partially-used outermost ring varies between seeds
    r0, c0 = seed_cell
    if not (0 <= r0 < n_rows and 0 <= c0 < n_cols):
        raise ValueError(f"cluster seed cell {seed_cell} outside grid")
    taken = {(r0, c0)}
    order = [(r0, c0)]
    frontier = [(r0, c0)]
    while len(order) < count:
        ring = []
        for (r, c) in frontier:
            for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                q = (r + dr, c + dc)
                if 0 <= q[0] < n_rows and 0 <= q[1] < n_cols and q not in taken:
                    taken.add(q)
                    ring.append(q)
        if not ring:  # grid exhausted
            break
        ring.sort()
        perm = rng.permutation(len(ring))
        order.extend(ring[i] for i in perm)
        frontier = ring
    return order[:count]


def _aligned_positions(
    n_rows: int, n_cols: int, count: int, rng
) -> list[tuple[int, int]]:
    chosen: list[tuple[int, int]] = []
    taken: set[tuple[int, int]] = set()
    while len(chosen) < count:
        orient = int(rng.integers(0, 2))  # 0 = row, 1 = column
        if orient == 0:
            idx = int(rng.integers(0, n_rows))
            line = [(idx, c) for c in range(n_cols)]
        else:
            idx = int(rng.integers(0, n_cols))
            line = [(r, idx) for r in range(n_rows)]
        fresh = [p for p in line if p not in taken]
        if not fresh:
            continue
        need = count - len(chosen)
        if len(fresh) > need:  # truncate the final line from a random end
            fresh = fresh[:need] if int(rng.integers(0, 2)) == 0 else fresh[-need:]
        chosen.extend(fresh)
        taken.update(fresh)
    return chosen


def select_faulty_cells(scenario: ErrorScenario, coding: CodingGrid, rng) -> list[tuple[int, int]]:
    """Faulty-cell positions for the scenario; consumes placement draws."""
    n_rows, n_cols = coding.cells.shape
    n_cells = n_rows * n_cols
    dist = scenario.distribution
    if isinstance(dist, StateSpecific):
        hits = np.isin(coding.cells, list(dist.target_states))
        return [tuple(p) for p in np.argwhere(hits)]
    count = faulty_cell_count(scenario.rate, n_cells)
    if count == 0:
        return []
    if isinstance(dist, Independent):
        flat = rng.choice(n_cells, size=count, replace=False)
        return [(int(f) // n_cols, int(f) % n_cols) for f in flat]
    if isinstance(dist, Clustered):
        seed_cell = dist.seed_cell if dist.seed_cell is not None else (n_rows // 2, n_cols // 2)
        return _cluster_positions(n_rows, n_cols, seed_cell, count, rng)
    if isinstance(dist, Aligned):
        return _aligned_positions(n_rows, n_cols, count, rng)
    raise TypeError(f"unknown distribution {dist!r}")


def realize_fault(
    error_type: ErrorType, original_state: int, palette: StatePalette, rng
) -> UnitCellResponse:
    """Response shown by one faulty cell; consumes value draws as documented."""
    if isinstance(error_type, Stuck):
        return palette.states[int(rng.integers(0, len(palette)))]
    if isinstance(error_type, OutOfState):
        phase = float(rng.uniform(0.0, 360.0))
        if error_type.uniform_gamma:
            gamma = float(rng.uniform(0.0, 1.0))
        elif error_type.gamma is not None:
            gamma = float(error_type.gamma)
        else:
            gamma = palette.states[0].gamma
        return UnitCellResponse(gamma, phase)
    if isinstance(error_type, Deterministic):
        return error_type.value if error_type.value is not None else palette.states[0]
    if isinstance(error_type, Biased):
        return palette.states[(original_state + error_type.delta) % len(palette)]
    raise TypeError(f"unknown error type {error_type!r}")


def build_fault_mask(
    coding: CodingGrid, palette: StatePalette, scenario: ErrorScenario
) -> FaultMask:
    """Select positions and realize responses with the scenario's own stream."""
    rng = np.random.Generator(np.random.PCG64(scenario.rng_seed))
    positions = select_faulty_cells(scenario, coding, rng)
    n_rows, n_cols = coding.cells.shape
    mask = np.zeros((n_rows, n_cols), dtype=bool)
    gamma = np.full((n_rows, n_cols), np.nan)
    phase = np.full((n_rows, n_cols), np.nan)
    # realized values are drawn row-major regardless of placement order
    for (r, c) in sorted(positions):
        resp = realize_fault(scenario.error_type, int(coding.cells[r, c]), palette, rng)
        mask[r, c] = True
        gamma[r, c] = resp.gamma
        phase[r, c] = resp.phi_deg
    return FaultMask(mask, gamma, phase, emergent_rate=float(mask.sum() / mask.size))


def apply_scenario(
    coding: CodingGrid, palette: StatePalette, scenario: ErrorScenario
) -> ReflectionGrid:
    """Faulty realization of the coding. Pure function of its arguments."""
    fault = build_fault_mask(coding, palette, scenario)
    gammas = np.array([s.gamma for s in palette.states])
    phases = np.array([s.phi_deg for s in palette.states])
    gamma = gammas[coding.cells]
    phase = phases[coding.cells]
    gamma[fault.mask] = fault.gamma[fault.mask]
    phase[fault.mask] = fault.phase_deg[fault.mask]
    return ReflectionGrid(coding.geometry, gamma, phase)


# ------------------------------------------------------------------ acronyms

_DIST_LETTER = {"I": Independent, "C": Clustered, "A": Aligned, "S": StateSpecific}
_TYPE_LETTER = {"S": Stuck, "O": OutOfState, "D": Deterministic, "B": Biased}

TABLE1_ACRONYMS = ("IS", "IO", "ID", "IB", "CS", "CO", "CD", "CB")


def parse_scenario_acronym(acronym: str) -> tuple[type, type]:
    """Two-letter code -> (distribution class, error type class).

    First letter: I/C/A/S for Independent/Clustered/Aligned/StateSpecific.
    Second letter: S/O/D/B for Stuck/OutOfState/Deterministic/Biased.
    """
    code = acronym.strip().upper()
    if len(code) != 2 or code[0] not in _DIST_LETTER or code[1] not in _TYPE_LETTER:
        raise ValueError(f"unknown scenario acronym {acronym!r}")
    return _DIST_LETTER[code[0]], _TYPE_LETTER[code[1]]
