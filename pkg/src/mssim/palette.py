"""Discrete unit-cell state palettes.

A programmable metasurface cell realizes one of a small set of measured
reflection responses. This module holds that set (the palette) plus the
circular phase arithmetic used to map an arbitrary required phase onto
the nearest available state.

Angles are degrees everywhere; conversion to radians happens only inside
field evaluation. Phases are stored canonically in [0, 360).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

__all__ = [
    "UnitCellResponse",
    "StatePalette",
    "default_palette",
    "load_palette",
    "save_palette",
    "circular_phase_distance",
]


def _canonical_phase(phi_deg: float) -> float:
    phi = float(phi_deg) % 360.0
    # -0.0 % 360.0 is 0.0, but e.g. 360.0 % 360.0 can return 0.0 while
    # tiny negatives wrap to 359.999...; that is the intended canonical form.
    return phi


@dataclass(frozen=True)
class UnitCellResponse:
    """Complex reflection response of one cell: amplitude and phase.

    Parameters
    ----------
    gamma : float
        Reflection amplitude, dimensionless, in [0, 1].
    phi_deg : float
        Reflection phase in degrees, canonicalized to [0, 360).
    """

    gamma: float
    phi_deg: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"amplitude out of range [0, 1]: {self.gamma}")
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "phi_deg", _canonical_phase(self.phi_deg))


@dataclass(frozen=True)
class StatePalette:
    """Ordered set of valid cell states.

    Invariants: at least two states, pairwise distinct phases. Labels
    default to s0..s{n-1} in state order.
    """

    states: tuple[UnitCellResponse, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        states = tuple(self.states)
        if len(states) < 2:
            raise ValueError("palette needs at least two states")
        phases = [s.phi_deg for s in states]
        if len(set(phases)) != len(phases):
            raise ValueError(f"duplicate state phases: {phases}")
        labels = tuple(self.labels) or tuple(f"s{i}" for i in range(len(states)))
        if len(labels) != len(states):
            raise ValueError("label count does not match state count")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.states)

    def nearest_state(self, phi_deg: float) -> int:
        """Index of the state whose phase is circularly closest to phi_deg.

        Exact ties resolve to the lower state index.
        """
        best = 0
        best_d = circular_phase_distance(phi_deg, self.states[0].phi_deg)
        for i, s in enumerate(self.states[1:], start=1):
            d = circular_phase_distance(phi_deg, s.phi_deg)
            if d < best_d:
                best, best_d = i, d
        return best


def circular_phase_distance(a_deg: float, b_deg: float) -> float:
    """Shortest angular distance between two phases, in [0, 180]."""
    d = abs(float(a_deg) - float(b_deg)) % 360.0
    return min(d, 360.0 - d)


def default_palette() -> StatePalette:
    """The measured 4-state palette: gamma 0.9, phases 45/135/225/315 deg."""
    return StatePalette(
        states=tuple(UnitCellResponse(0.9, p) for p in (45.0, 135.0, 225.0, 315.0)),
    )


def load_palette(path) -> StatePalette:
    """Read a palette document (YAML list of {label, gamma, phi_deg})."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, list) or len(doc) < 2:
        raise ValueError("palette document must list at least two states")
    states = []
    labels = []
    for rec in doc:
        try:
            states.append(UnitCellResponse(rec["gamma"], rec["phi_deg"]))
            labels.append(str(rec.get("label", f"s{len(labels)}")))
        except (TypeError, KeyError) as exc:
            raise ValueError(f"malformed palette record: {rec!r}") from exc
    return StatePalette(states=tuple(states), labels=tuple(labels))


def save_palette(palette: StatePalette, path) -> None:
    doc = [
        {"label": lab, "gamma": s.gamma, "phi_deg": s.phi_deg}
        for lab, s in zip(palette.labels, palette.states)
    ]
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)
