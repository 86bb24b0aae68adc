"""Session-scoped fixtures for the reference configuration."""

from __future__ import annotations

import pytest

import mssim as ms

import acceptance_report


def pytest_terminal_summary(terminalreporter):
    if acceptance_report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_report.LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def geometry() -> ms.MetasurfaceGeometry:
    return ms.MetasurfaceGeometry.from_frequency(15, 15, 4e-3, 25e9)


@pytest.fixture(scope="session")
def target() -> ms.SteeringTarget:
    return ms.SteeringTarget(45.0, 45.0)


@pytest.fixture(scope="session")
def palette() -> ms.StatePalette:
    return ms.default_palette()


@pytest.fixture(scope="session")
def coding(geometry, target, palette) -> ms.CodingGrid:
    return ms.generate_coding(geometry, target, palette)


@pytest.fixture(scope="session")
def grid(coding, palette) -> ms.ReflectionGrid:
    return ms.ReflectionGrid.from_coding(coding, palette)


@pytest.fixture(scope="session")
def golden_pattern(grid) -> ms.FarFieldPattern:
    return ms.evaluate_pattern(grid, ms.AngularGrid.survey())


@pytest.fixture(scope="session")
def golden_report(golden_pattern, target, grid) -> ms.MetricsReport:
    return ms.analyze_pattern(
        golden_pattern, target, field_fn=ms.field_fn_for(grid), refine="all"
    )
