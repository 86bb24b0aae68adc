"""Performance metrics of a far-field pattern.

Five quantities summarize a pattern against its steering target:

    TD      Euclidean angular distance between target and main-lobe
            direction, degrees (phi difference taken cyclically)
    D       normalized level at a direction, dB re a reference magnitude
    SLL     peak of the side lobe nearest to the main lobe, dB re main
    SLA     side-lobe power accumulated over all non-main lobes, dB re
            the main lobe's power
    HPBW    -3 dB width of the main lobe, averaged over the theta cut
            and the (scaled) phi cut

Lobes come from a discrete watershed: every sample above a floor joins
the basin of its steepest-ascent neighbor chain (8-neighborhood, phi
wraps, the theta=0 row is one node). The main lobe is the one with the
greatest peak magnitude.

Peak directions are refined by re-evaluating the field on a fine local
grid when an exact evaluator is available, else by a parabolic fit on
the sampled pattern. All functions are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coding import SteeringTarget
from .farfield import DB_FLOOR, FarFieldPattern

__all__ = [
    "Lobe",
    "MetricsReport",
    "segment_lobes",
    "target_deviation",
    "directivity_at",
    "sll",
    "sla",
    "hpbw",
    "analyze_pattern",
    "great_circle_deg",
    "METRICS_CSV_HEADER",
]

# vectorized exact evaluator: (theta_deg array, phi_deg array) -> complex array
FieldFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

LOBE_FLOOR_DB = -30.0
REFINE_STEP_DEG = 0.25
REFINE_WINDOW_DEG = 5.0

METRICS_CSV_HEADER = (
    "scenario,rate,trial,td_deg,d_target_db,d_actual_db,"
    "sll_db,sll_max_db,sla_db,hpbw_deg,n_lobes,flags"
)


@dataclass(frozen=True)
class Lobe:
    """One watershed basin: its refined peak and its integrated power."""

    peak_theta_deg: float
    peak_phi_deg: float
    peak_magnitude: float
    power: float  # sum of |E|^2 sin(theta) dtheta dphi over member samples
    n_samples: int
    peak_index: tuple[int, int]  # grid indices of the unrefined peak


@dataclass(frozen=True)
class MetricsReport:
    td_deg: float
    d_target_db: float
    d_actual_db: float
    sll_db: float
    sll_max_db: float
    sla_db: float
    hpbw_deg: float
    n_lobes: int
    flags: tuple[str, ...]
    main_direction: tuple[float, float]
    lobes: tuple[Lobe, ...] = field(repr=False, default=())

    def csv_fields(self) -> list[str]:
        return [
            f"{float(self.td_deg)!r}",
            f"{float(self.d_target_db)!r}",
            f"{float(self.d_actual_db)!r}",
            f"{float(self.sll_db)!r}",
            f"{float(self.sll_max_db)!r}",
            f"{float(self.sla_db)!r}",
            f"{float(self.hpbw_deg)!r}",
            str(int(self.n_lobes)),
            "+".join(self.flags) if self.flags else "",
        ]


# ------------------------------------------------------------- lobe finding


def _watershed_roots(mag: np.ndarray) -> np.ndarray:
    """Flat root index per sample via steepest-ascent parent pointers."""
    n_th, n_ph = mag.shape
    idx = np.arange(n_th * n_ph).reshape(n_th, n_ph)
    best_val = mag.copy()
    parent = idx.copy()
    # fixed neighbor scan order makes tie-breaking deterministic; exact
    # value ties resolve toward the lower flat index so plateaus merge
    # into one basin instead of fragmenting
    for dt in (-1, 0, 1):
        for dp in (-1, 0, 1):
            if dt == 0 and dp == 0:
                continue
            rows = np.arange(n_th) + dt
            valid = (rows >= 0) & (rows < n_th)
            cols = (np.arange(n_ph) + dp) % n_ph  # phi wraps
            nb_val = np.full((n_th, n_ph), -np.inf)
            nb_idx = np.zeros((n_th, n_ph), dtype=np.int64)
            nb_val[valid, :] = mag[rows[valid]][:, cols]
            nb_idx[valid, :] = idx[rows[valid]][:, cols]
            better = (nb_val > best_val) | ((nb_val == best_val) & (nb_idx < parent))
            best_val = np.where(better, nb_val, best_val)
            parent = np.where(better, nb_idx, parent)
    if n_th > 1:
        # theta=0 is a single physical direction: collapse the whole row
        # onto one node, climbing into row 1 if anything there is higher
        j_best = int(mag[1].argmax())
        if mag[1, j_best] > mag[0, 0]:
            parent[0, :] = idx[1, j_best]
        else:
            parent[0, :] = idx[0, 0]
    flat = parent.reshape(-1)
    while True:
        jumped = flat[flat]
        if np.array_equal(jumped, flat):
            return jumped
        flat = jumped


def segment_lobes(
    pattern: FarFieldPattern, floor_db: float = LOBE_FLOOR_DB
) -> list[Lobe]:
    """Partition above-floor samples into lobes, sorted by peak magnitude.

    The floor is relative to the pattern's own maximum. Raises if the
    pattern carries no energy at all.
    """
    mag = pattern.magnitude
    peak = float(mag.max())
    if peak <= 0.0:
        raise ValueError("pattern entirely below floor")
    roots = _watershed_roots(mag).reshape(mag.shape)
    above = mag >= peak * 10.0 ** (floor_db / 20.0)
    th = np.deg2rad(pattern.grid.theta_deg)
    d_omega = math.radians(max(pattern.grid.theta_step, 1e-12)) * math.radians(
        max(pattern.grid.phi_step, 1e-12)
    )
    weights = np.sin(th)[:, None] * d_omega
    lobes = []
    for root in np.unique(roots[above]):
        members = (roots == root) & above
        i, j = np.unravel_index(int(root), mag.shape)
        lobes.append(
            Lobe(
                peak_theta_deg=float(pattern.grid.theta_deg[i]),
                peak_phi_deg=float(pattern.grid.phi_deg[j]),
                peak_magnitude=float(mag[i, j]),
                power=float((mag[members] ** 2 * np.broadcast_to(weights, mag.shape)[members]).sum()),
                n_samples=int(members.sum()),
                peak_index=(int(i), int(j)),
            )
        )
    lobes.sort(key=lambda lb: (-lb.peak_magnitude, lb.peak_theta_deg, lb.peak_phi_deg))
    return lobes


# ------------------------------------------------------------------ helpers


def great_circle_deg(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Angle between two (theta, phi) directions on the sphere, degrees."""
    t1, p1 = np.deg2rad(a)
    t2, p2 = np.deg2rad(b)
    c = np.sin(t1) * np.sin(t2) * np.cos(p1 - p2) + np.cos(t1) * np.cos(t2)
    return float(np.rad2deg(np.arccos(np.clip(c, -1.0, 1.0))))


def _wrap_phi_diff(a_deg: float, b_deg: float) -> float:
    """a - b mapped into (-180, 180]."""
    d = (a_deg - b_deg) % 360.0
    return d - 360.0 if d > 180.0 else d


def _interp_magnitude(pattern: FarFieldPattern, theta_deg: float, phi_deg: float) -> float:
    """Bilinear |E| on the sampled grid; phi wraps, theta clamps to the grid."""
    th = pattern.grid.theta_deg
    ph = pattern.grid.phi_deg
    mag = pattern.magnitude
    t = min(max(theta_deg, th[0]), th[-1])
    i = int(np.searchsorted(th, t, side="right") - 1)
    i = min(max(i, 0), len(th) - 2) if len(th) > 1 else 0
    ft = 0.0 if len(th) == 1 else (t - th[i]) / (th[i + 1] - th[i])
    p = phi_deg % 360.0
    if len(ph) == 1:
        j, fp, j2 = 0, 0.0, 0
    elif p >= ph[-1]:  # wrap segment between the last and first phi samples
        j = len(ph) - 1
        j2 = 0
        span = 360.0 - ph[-1] + ph[0]
        fp = (p - ph[-1]) / span
    else:
        j = int(np.searchsorted(ph, p, side="right") - 1)
        j = min(max(j, 0), len(ph) - 2)
        j2 = j + 1
        fp = (p - ph[j]) / (ph[j2] - ph[j])
    i2 = min(i + 1, len(th) - 1)
    top = mag[i, j] * (1 - fp) + mag[i, j2] * fp
    bot = mag[i2, j] * (1 - fp) + mag[i2, j2] * fp
    return float(top * (1 - ft) + bot * ft)


def _refine_peak(
    pattern: FarFieldPattern,
    lobe: Lobe,
    field_fn: FieldFn | None,
    step_deg: float = REFINE_STEP_DEG,
    window_deg: float = REFINE_WINDOW_DEG,
) -> tuple[float, float, float]:
    """Sub-grid peak location. Exact re-evaluation when field_fn is given."""
    t0, p0 = lobe.peak_theta_deg, lobe.peak_phi_deg
    if field_fn is not None:
        th = np.arange(t0 - window_deg, t0 + window_deg + step_deg / 2, step_deg)
        th = th[(th >= 0.0) & (th <= 90.0)]
        ph = np.arange(p0 - window_deg, p0 + window_deg + step_deg / 2, step_deg)
        tt, pp = np.meshgrid(th, ph % 360.0, indexing="ij")
        mag = np.abs(field_fn(tt.reshape(-1), pp.reshape(-1))).reshape(tt.shape)
        i, j = np.unravel_index(int(mag.argmax()), mag.shape)
        if mag[i, j] >= lobe.peak_magnitude:
            return float(tt[i, j]), float(pp[i, j]), float(mag[i, j])
        return t0, p0, lobe.peak_magnitude
    # parabolic vertex through the three samples around the peak, per axis
    i, j = lobe.peak_index
    mag = pattern.magnitude
    th = pattern.grid.theta_deg
    ph = pattern.grid.phi_deg

    def vertex(vm, v0, vp, x0, h):
        denom = vm - 2 * v0 + vp
        if denom >= 0 or h == 0:
            return x0, v0
        off = 0.5 * (vm - vp) / denom
        off = min(max(off, -0.5), 0.5)
        return x0 + off * h, v0 - 0.25 * (vm - vp) * off

    t_ref, m_t = (th[i], mag[i, j])
    if 0 < i < len(th) - 1:
        t_ref, m_t = vertex(mag[i - 1, j], mag[i, j], mag[i + 1, j], th[i], th[1] - th[0])
    p_ref, m_p = (ph[j], mag[i, j])
    if len(ph) > 2:
        jm, jp = (j - 1) % len(ph), (j + 1) % len(ph)
        p_ref, m_p = vertex(mag[i, jm], mag[i, j], mag[i, jp], ph[j], ph[1] - ph[0])
    return float(t_ref), float(p_ref % 360.0), float(max(m_t, m_p))


# ------------------------------------------------------------------ metrics


def target_deviation(
    main_direction: tuple[float, float], target: SteeringTarget
) -> float:
    """sqrt(dtheta^2 + dphi^2) with the cyclic phi difference, degrees."""
    dt = target.theta_deg - main_direction[0]
    dp = _wrap_phi_diff(target.phi_deg, main_direction[1])
    return math.hypot(dt, dp)


def directivity_at(
    pattern: FarFieldPattern,
    direction: tuple[float, float],
    reference: float,
    floor_db: float = DB_FLOOR,
) -> float:
    """Normalized level at a direction, dB; bilinear between grid samples."""
    if reference <= 0:
        raise ValueError("reference must be positive")
    mag = _interp_magnitude(pattern, direction[0], direction[1])
    if mag <= 0:
        return floor_db
    return max(20.0 * math.log10(mag / reference), floor_db)


def sll(
    lobes: list[Lobe],
    main_direction: tuple[float, float] | None = None,
    floor_db: float = DB_FLOOR,
) -> tuple[float, float, bool]:
    """(nearest-side-lobe level, largest-side-lobe level, degenerate flag).

    Nearest means smallest great-circle distance between peak directions.
    A single-lobe pattern reports the floor with the flag set.
    """
    if not lobes:
        raise ValueError("no lobes")
    main = lobes[0]
    if main_direction is None:
        main_direction = (main.peak_theta_deg, main.peak_phi_deg)
    sides = lobes[1:]
    if not sides:
        return floor_db, floor_db, True
    ranked = sorted(
        sides,
        key=lambda lb: (
            round(great_circle_deg(main_direction, (lb.peak_theta_deg, lb.peak_phi_deg)), 9),
            -lb.peak_magnitude,
        ),
    )
    nearest = ranked[0]
    largest = max(sides, key=lambda lb: lb.peak_magnitude)
    ref = main.peak_magnitude
    lvl_near = max(20.0 * math.log10(nearest.peak_magnitude / ref), floor_db)
    lvl_max = max(20.0 * math.log10(largest.peak_magnitude / ref), floor_db)
    return lvl_near, lvl_max, False


def sla(
    lobes: list[Lobe],
    convention: str = "integrated",
    floor_db: float = DB_FLOOR,
) -> float:
    """Side-lobe accumulation, dB relative to the main lobe.

    "integrated" compares solid-angle-weighted basin powers (default);
    "peak_sum" compares the sum of squared side-lobe peaks to the squared
    main peak.
    """
    if not lobes:
        raise ValueError("no lobes")
    main, sides = lobes[0], lobes[1:]
    if not sides:
        return floor_db
    if convention == "integrated":
        num = sum(lb.power for lb in sides)
        den = main.power
    elif convention == "peak_sum":
        num = sum(lb.peak_magnitude**2 for lb in sides)
        den = main.peak_magnitude**2
    else:
        raise ValueError(f"unknown SLA convention {convention!r}")
    if num <= 0 or den <= 0:
        return floor_db
    return max(10.0 * math.log10(num / den), floor_db)


def _reflected_magnitude(
    theta_deg: float,
    phi_deg: float,
    pattern: FarFieldPattern,
    field_fn: FieldFn | None,
) -> float:
    # negative theta continues through the pole on the opposite azimuth
    if theta_deg < 0:
        theta_deg, phi_deg = -theta_deg, phi_deg + 180.0
    theta_deg = min(theta_deg, 90.0)
    if field_fn is not None:
        return float(abs(field_fn(np.array([theta_deg]), np.array([phi_deg % 360.0]))[0]))
    return _interp_magnitude(pattern, theta_deg, phi_deg)


def _cut_width(
    pattern: FarFieldPattern,
    field_fn: FieldFn | None,
    peak: tuple[float, float],
    peak_mag: float,
    axis: str,
) -> tuple[float, bool]:
    """-3 dB full width along one principal cut through the peak."""
    half = peak_mag / math.sqrt(2.0)
    t0, p0 = peak

    def level(x: float) -> float:
        if axis == "theta":
            return _reflected_magnitude(x, p0, pattern, field_fn)
        return _reflected_magnitude(t0, x, pattern, field_fn)

    lo, hi = (-90.0, 90.0) if axis == "theta" else (p0 - 180.0, p0 + 180.0)
    x0 = t0 if axis == "theta" else p0
    edges = []
    capped = False
    for sign in (-1.0, 1.0):
        x, bracket = x0, None
        while True:
            x_next = x + sign * 0.5
            if (sign < 0 and x_next < lo) or (sign > 0 and x_next > hi):
                limit = lo if sign < 0 else hi
                if level(limit) >= half:
                    edges.append(limit)
                    capped = True
                else:
                    bracket = (x, limit)
                break
            if level(x_next) < half:
                bracket = (x, x_next)
                break
            x = x_next
        if bracket is not None:
            a, b = bracket
            for _ in range(48):
                mid = 0.5 * (a + b)
                if level(mid) >= half:
                    a = mid
                else:
                    b = mid
            edges.append(0.5 * (a + b))
    return abs(edges[1] - edges[0]), capped


def hpbw(
    pattern: FarFieldPattern,
    main_peak: tuple[float, float],
    peak_magnitude: float,
    field_fn: FieldFn | None = None,
) -> tuple[float, bool]:
    """-3 dB width: (theta-cut + sin(theta_a) * phi-cut) / 2, degrees."""
    w_theta, cap_t = _cut_width(pattern, field_fn, main_peak, peak_magnitude, "theta")
    w_phi, cap_p = _cut_width(pattern, field_fn, main_peak, peak_magnitude, "phi")
    width = 0.5 * (w_theta + w_phi * math.sin(math.radians(main_peak[0])))
    return width, (cap_t or cap_p)


# ------------------------------------------------------------ full analysis


def analyze_pattern(
    pattern: FarFieldPattern,
    target: SteeringTarget,
    field_fn: FieldFn | None = None,
    reference: float | None = None,
    floor_db: float = LOBE_FLOOR_DB,
    refine: str = "all",
    sla_convention: str = "integrated",
) -> MetricsReport:
    """Extract the full metric set from one pattern.

    field_fn, when given, evaluates the exact field for sub-grid peak
    refinement and -3 dB bisection; otherwise interpolation on the
    sampled grid is used. reference overrides the 0 dB magnitude (e.g.
    the fault-free peak when analyzing faulty patterns); by default the
    refined main-lobe peak normalizes itself to 0 dB.

    refine: "all" refines every lobe peak, "main" only the main lobe,
    "none" keeps grid-resolution peaks.
    """
    if refine not in ("all", "main", "none"):
        raise ValueError(f"unknown refine mode {refine!r}")
    lobes = segment_lobes(pattern, floor_db=floor_db)
    flags: list[str] = []

    refined: list[Lobe] = []
    for k, lb in enumerate(lobes):
        if refine == "all" or (refine == "main" and k == 0):
            t, p, m = _refine_peak(pattern, lb, field_fn)
            refined.append(
                Lobe(t, p, m, lb.power, lb.n_samples, lb.peak_index)
            )
        else:
            refined.append(lb)
    # refinement can promote a side lobe past the main one only in
    # near-tie situations; keep the ordering stable by re-sorting
    refined.sort(key=lambda lb: (-lb.peak_magnitude, lb.peak_theta_deg, lb.peak_phi_deg))
    main = refined[0]
    main_dir = (main.peak_theta_deg, main.peak_phi_deg)
    if main.peak_theta_deg <= pattern.grid.theta_step:
        flags.append("pole")

    ref = main.peak_magnitude if reference is None else float(reference)
    td = target_deviation(main_dir, target)
    d_target = directivity_at(pattern, (target.theta_deg, target.phi_deg), ref)
    d_actual = 20.0 * math.log10(main.peak_magnitude / ref)
    lvl_near, lvl_max, degenerate = sll(refined, main_dir)
    if degenerate:
        flags.append("single_lobe")
    sla_db = sla(refined, convention=sla_convention)
    width, capped = hpbw(pattern, main_dir, main.peak_magnitude, field_fn)
    if capped:
        flags.append("hpbw_capped")

    return MetricsReport(
        td_deg=td,
        d_target_db=d_target,
        d_actual_db=d_actual,
        sll_db=lvl_near,
        sll_max_db=lvl_max,
        sla_db=sla_db,
        hpbw_deg=width,
        n_lobes=len(refined),
        flags=tuple(flags),
        main_direction=main_dir,
        lobes=tuple(refined),
    )
