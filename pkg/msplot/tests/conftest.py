"""Hand-written CSV fixtures pinning the public schemas."""

from __future__ import annotations

import math

import pytest


def _pattern_lines(reference=10.0, floor=False):
    """3 theta x 4 phi grid, row-major, peak at (30, 90) unless floored."""
    lines = [
        "# mssim pattern v1",
        f"# reference_peak = {reference!r}",
        "theta_deg,phi_deg,magnitude,db",
    ]
    thetas = (0.0, 30.0, 60.0)
    phis = (0.0, 90.0, 180.0, 270.0)
    for t in thetas:
        for p in phis:
            if floor:
                mag = 0.0
            elif (t, p) == (30.0, 90.0):
                mag = reference
            else:
                mag = reference / (4.0 + t / 15.0 + p / 90.0)
            db = -100.0 if mag == 0.0 else max(20.0 * math.log10(mag / reference), -100.0)
            lines.append(f"{t!r},{p!r},{mag!r},{db!r}")
    return lines


@pytest.fixture
def pattern_csv(tmp_path):
    path = tmp_path / "pattern.csv"
    path.write_text("\n".join(_pattern_lines()) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def floor_csv(tmp_path):
    """Every sample at the dB floor: a valid but featureless pattern."""
    path = tmp_path / "floor.csv"
    path.write_text("\n".join(_pattern_lines(floor=True)) + "\n", encoding="utf-8")
    return path


SWEEP_LINES = [
    "scenario,rate,metric,mean,std,min,max,n,flagged",
    "ID,0.0,d_target_db,-0.1,0.0,-0.1,-0.1,3,0",
    "ID,0.0,hpbw_deg,12.1,0.0,12.1,12.1,3,0",
    "ID,0.2,d_target_db,-2.5,0.8,-3.4,-1.7,3,0",
    "ID,0.2,hpbw_deg,13.0,1.1,12.0,14.2,3,0",
    "ID,0.4,d_target_db,-6.0,1.5,-7.6,-4.4,3,0",
    "ID,0.4,hpbw_deg,nan,nan,nan,nan,0,3",
    "CD,0.0,d_target_db,-0.1,0.0,-0.1,-0.1,3,0",
    "CD,0.0,hpbw_deg,12.1,0.0,12.1,12.1,3,0",
    "CD,0.2,d_target_db,-3.1,0.9,-4.1,-2.3,3,0",
    "CD,0.2,hpbw_deg,13.5,1.2,12.4,14.8,3,0",
    "CD,0.4,d_target_db,-8.2,2.0,-10.4,-6.3,3,0",
    "CD,0.4,hpbw_deg,21.0,4.0,16.8,25.1,2,1",
]


@pytest.fixture
def sweep_csv(tmp_path):
    path = tmp_path / "sweep.csv"
    path.write_text("\n".join(SWEEP_LINES) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def rate_zero_csv(tmp_path):
    """Only rate-0 rows: curves should render as flat single points."""
    lines = [line for line in SWEEP_LINES if ",0.0," in line or line.startswith("scenario")]
    path = tmp_path / "zero.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
