import cmath
import math

import numpy as np
import pytest

import mssim as ms
from oracle_farfield import naive_field, random_reflection


class TestReflectionGrid:
    def test_from_coding(self, coding, palette, grid):
        n, m = coding.cells.shape
        for i in range(0, n, 5):
            for j in range(0, m, 5):
                state = palette.states[coding.cells[i, j]]
                assert grid.gamma[i, j] == state.gamma
                assert grid.phase_deg[i, j] == state.phi_deg

    def test_amplitude_range_enforced(self, geometry):
        gamma = np.full((15, 15), 1.5)
        phase = np.zeros((15, 15))
        with pytest.raises(ValueError):
            ms.ReflectionGrid(geometry, gamma, phase)

    def test_shape_mismatch_rejected(self, geometry):
        with pytest.raises(ValueError):
            ms.ReflectionGrid(geometry, np.ones((3, 3)), np.zeros((3, 3)))

    def test_arrays_read_only(self, grid):
        with pytest.raises(ValueError):
            grid.gamma[0, 0] = 0.0

    def test_response(self, grid):
        resp = grid.response()
        assert resp.shape == grid.gamma.shape
        assert np.allclose(np.abs(resp), grid.gamma)


class TestAngularGrid:
    def test_survey_shape(self):
        g = ms.AngularGrid.survey()
        assert g.theta_deg.shape == (91,)
        assert g.phi_deg.shape == (360,)
        assert g.theta_step == pytest.approx(1.0)
        assert g.phi_step == pytest.approx(1.0)

    def test_survey_half_degree(self):
        g = ms.AngularGrid.survey(0.5)
        assert g.theta_deg.shape == (181,)
        assert g.phi_deg.shape == (720,)

    def test_nonuniform_rejected(self):
        with pytest.raises(ValueError):
            ms.AngularGrid(np.array([0.0, 1.0, 3.0]), np.array([0.0, 1.0]))

    def test_descending_rejected(self):
        with pytest.raises(ValueError):
            ms.AngularGrid(np.array([2.0, 1.0, 0.0]), np.array([0.0, 1.0]))

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            ms.AngularGrid(np.array([0.0, 91.0]), np.array([0.0, 1.0]))


class TestKernelAgainstOracle:
    def test_random_grids(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            grid = random_reflection(rng, n_rows=5, n_cols=7)
            for _ in range(20):
                theta = float(rng.uniform(0.0, 90.0))
                phi = float(rng.uniform(0.0, 360.0))
                fast = ms.field_at(grid, theta, phi)
                slow = naive_field(
                    grid.gamma,
                    grid.phase_deg,
                    grid.geometry.cell_size_m,
                    grid.geometry.wavelength_m,
                    theta,
                    phi,
                )
                assert fast == pytest.approx(slow, rel=1e-9, abs=1e-12)

    def test_field_many_matches_field_at(self, grid):
        rng = np.random.default_rng(3)
        thetas = rng.uniform(0.0, 90.0, size=25)
        phis = rng.uniform(0.0, 360.0, size=25)
        batch = ms.field_many(grid, thetas, phis)
        for k in range(25):
            assert batch[k] == pytest.approx(
                ms.field_at(grid, float(thetas[k]), float(phis[k])), rel=1e-12
            )

    def test_theta_out_of_range(self, grid):
        with pytest.raises(ValueError):
            ms.field_at(grid, 90.5, 0.0)
        with pytest.raises(ValueError):
            ms.field_at(grid, -0.5, 0.0)


class TestFieldProperties:
    def test_uniform_broadside_peak(self):
        geo = ms.MetasurfaceGeometry(6, 9, 4e-3, ms.SPEED_OF_LIGHT / 25e9)
        grid = ms.ReflectionGrid(geo, np.full((6, 9), 0.9), np.full((6, 9), 45.0))
        for phi in (0.0, 90.0, 211.0):
            e = ms.field_at(grid, 0.0, phi)
            assert abs(e) == pytest.approx(6 * 9 * 0.9, rel=1e-12)

    def test_cos_theta_null_at_horizon(self, grid):
        for phi in (0.0, 45.0, 180.0):
            e = ms.field_at(grid, 90.0, phi)
            assert abs(e) <= 1e-10 * grid.gamma.size

    def test_superposition(self):
        # the field is linear in the per-cell complex responses
        rng = np.random.default_rng(5)
        geo = ms.MetasurfaceGeometry(3, 3, 4e-3, 1.2e-2)
        gamma = rng.uniform(0.1, 1.0, size=(3, 3))
        phase = rng.uniform(0.0, 360.0, size=(3, 3))
        full = ms.ReflectionGrid(geo, gamma, phase)
        angles = [(10.0, 20.0), (45.0, 45.0), (80.0, 300.0)]
        for theta, phi in angles:
            total = 0.0 + 0.0j
            for i in range(3):
                for j in range(3):
                    g1 = np.zeros((3, 3))
                    g1[i, j] = gamma[i, j]
                    single = ms.ReflectionGrid(geo, g1, phase)
                    total += ms.field_at(single, theta, phi)
            assert total == pytest.approx(ms.field_at(full, theta, phi), rel=1e-9)

    def test_global_phase_shift(self, grid):
        shifted = ms.ReflectionGrid(
            grid.geometry, grid.gamma, (grid.phase_deg + 90.0) % 360.0
        )
        for theta, phi in [(45.0, 45.0), (10.0, 200.0), (70.0, 10.0)]:
            a = ms.field_at(grid, theta, phi)
            b = ms.field_at(shifted, theta, phi)
            assert b == pytest.approx(a * cmath.exp(1j * math.pi / 2), rel=1e-9)
            assert abs(b) == pytest.approx(abs(a), rel=1e-9)

    def test_transpose_mirrors_azimuth(self, grid):
        # swapping rows and columns swaps the roles of cos(phi) and
        # sin(phi), i.e. reflects the pattern about phi = 45
        transposed = ms.ReflectionGrid(
            ms.MetasurfaceGeometry(
                grid.geometry.n_cols,
                grid.geometry.n_rows,
                grid.geometry.cell_size_m,
                grid.geometry.wavelength_m,
            ),
            grid.gamma.T.copy(),
            grid.phase_deg.T.copy(),
        )
        for theta, phi in [(30.0, 10.0), (45.0, 45.0), (60.0, 80.0)]:
            a = ms.field_at(grid, theta, phi)
            b = ms.field_at(transposed, theta, (90.0 - phi) % 360.0)
            assert b == pytest.approx(a, rel=1e-9)


class TestEvaluatePattern:
    def test_shape_and_reference(self, golden_pattern):
        assert golden_pattern.magnitude.shape == (91, 360)
        assert golden_pattern.reference_peak == golden_pattern.magnitude.max()

    def test_argmax_near_target(self, golden_pattern, target):
        i, j = np.unravel_index(
            np.argmax(golden_pattern.magnitude), golden_pattern.magnitude.shape
        )
        theta = golden_pattern.grid.theta_deg[i]
        phi = golden_pattern.grid.phi_deg[j]
        assert abs(theta - target.theta_deg) <= 2.0
        assert ms.circular_phase_distance(phi, target.phi_deg) <= 2.0

    def test_matches_field_at(self, grid, golden_pattern):
        for i, j in [(45, 45), (0, 0), (44, 45), (90, 180)]:
            t = float(golden_pattern.grid.theta_deg[i])
            p = float(golden_pattern.grid.phi_deg[j])
            assert golden_pattern.magnitude[i, j] == pytest.approx(
                abs(ms.field_at(grid, t, p)), rel=1e-12
            )


class TestDb:
    def test_peak_is_zero_db(self, golden_pattern):
        db = ms.to_db(golden_pattern)
        assert db.max() == pytest.approx(0.0, abs=1e-12)

    def test_floor_clamps_zero_magnitude(self):
        geo = ms.MetasurfaceGeometry(2, 2, 4e-3, 1.2e-2)
        grid = ms.ReflectionGrid(geo, np.ones((2, 2)), np.zeros((2, 2)))
        pat = ms.evaluate_pattern(grid, ms.AngularGrid.survey(5.0))
        db = ms.to_db(pat)
        assert db.min() >= ms.DB_FLOOR

    def test_custom_reference_shifts(self, golden_pattern):
        a = ms.to_db(golden_pattern)
        b = ms.to_db(golden_pattern, reference=golden_pattern.reference_peak * 10.0)
        mask = a > -79.0  # keep both sides clear of the -100 dB floor
        assert np.allclose(b[mask], a[mask] - 20.0, atol=1e-9)

    def test_nonpositive_reference_rejected(self, golden_pattern):
        with pytest.raises(ValueError):
            ms.to_db(golden_pattern, reference=0.0)


class TestPatternCsv:
    def test_round_trip(self, tmp_path, grid):
        pat = ms.evaluate_pattern(grid, ms.AngularGrid.survey(5.0))
        path = tmp_path / "p.csv"
        ms.write_pattern_csv(pat, path)
        back = ms.read_pattern_csv(path)
        assert np.array_equal(back.grid.theta_deg, pat.grid.theta_deg)
        assert np.array_equal(back.grid.phi_deg, pat.grid.phi_deg)
        assert np.array_equal(back.magnitude, pat.magnitude)
        assert back.reference_peak == pat.reference_peak

    def test_header_lines(self, tmp_path, grid):
        pat = ms.evaluate_pattern(grid, ms.AngularGrid.survey(15.0))
        path = tmp_path / "p.csv"
        ms.write_pattern_csv(pat, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "# mssim pattern v1"
        assert lines[1].startswith("# reference_peak = ")
        assert lines[2] == "theta_deg,phi_deg,magnitude,db"
        assert len(lines) == 3 + pat.magnitude.size

    def test_row_major_order(self, tmp_path, grid):
        pat = ms.evaluate_pattern(grid, ms.AngularGrid.survey(30.0))
        path = tmp_path / "p.csv"
        ms.write_pattern_csv(pat, path)
        rows = [l.split(",") for l in path.read_text().splitlines()[3:]]
        thetas = [float(r[0]) for r in rows]
        assert thetas == sorted(thetas)
        first_block = [float(r[1]) for r in rows[: pat.grid.phi_deg.size]]
        assert first_block == list(pat.grid.phi_deg)

    def test_incomplete_csv_rejected(self, tmp_path, grid):
        pat = ms.evaluate_pattern(grid, ms.AngularGrid.survey(30.0))
        path = tmp_path / "p.csv"
        ms.write_pattern_csv(pat, path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(ValueError):
            ms.read_pattern_csv(path)

    def test_missing_reference_rejected(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("theta_deg,phi_deg,magnitude,db\n0.0,0.0,1.0,0.0\n")
        with pytest.raises(ValueError):
            ms.read_pattern_csv(path)
