import math

import numpy as np
import pytest

import mssim as ms
from oracle_farfield import naive_required_phase


class TestGeometry:
    def test_from_frequency(self):
        geo = ms.MetasurfaceGeometry.from_frequency(15, 15, 4e-3, 25e9)
        assert geo.wavelength_m == pytest.approx(ms.SPEED_OF_LIGHT / 25e9)
        assert geo.wavelength_m == pytest.approx(0.01199, abs=1e-5)

    def test_wavenumber(self):
        geo = ms.MetasurfaceGeometry(2, 2, 1e-3, 1e-2)
        assert geo.wavenumber == pytest.approx(2 * math.pi / 1e-2)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_rows=0, n_cols=5, cell_size_m=1e-3, wavelength_m=1e-2),
            dict(n_rows=5, n_cols=0, cell_size_m=1e-3, wavelength_m=1e-2),
            dict(n_rows=5, n_cols=5, cell_size_m=0.0, wavelength_m=1e-2),
            dict(n_rows=5, n_cols=5, cell_size_m=1e-3, wavelength_m=0.0),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ms.MetasurfaceGeometry(**kwargs)


class TestSteeringTarget:
    @pytest.mark.parametrize("theta", [-0.1, 90.0, 95.0])
    def test_theta_range(self, theta):
        with pytest.raises(ValueError):
            ms.SteeringTarget(theta, 0.0)

    @pytest.mark.parametrize("phi", [-0.1, 360.0, 400.0])
    def test_phi_range(self, phi):
        with pytest.raises(ValueError):
            ms.SteeringTarget(45.0, phi)

    def test_boundaries_accepted(self):
        ms.SteeringTarget(0.0, 0.0)
        ms.SteeringTarget(89.999, 359.999)


class TestRequiredPhase:
    def test_broadside_is_zero(self, geometry):
        tgt = ms.SteeringTarget(0.0, 123.0)
        for m, n in [(1, 1), (3, 7), (15, 15)]:
            assert ms.required_phase(geometry, tgt, m, n) == pytest.approx(0.0)

    def test_half_wavelength_cell_hand_value(self):
        # D_u = lambda/2, theta=phi=45, m=n=1: 180*(1/2 + 1/2) = 180
        geo = ms.MetasurfaceGeometry(4, 4, 5e-3, 1e-2)
        tgt = ms.SteeringTarget(45.0, 45.0)
        assert ms.required_phase(geo, tgt, 1, 1) == pytest.approx(180.0, abs=1e-9)

    def test_linear_increment_in_m(self, geometry):
        tgt = ms.SteeringTarget(37.0, 10.0)
        step = (
            360.0
            * geometry.cell_size_m
            / geometry.wavelength_m
            * math.cos(math.radians(10.0))
            * math.sin(math.radians(37.0))
        )
        for m in range(1, 10):
            a = ms.required_phase(geometry, tgt, m, 3)
            b = ms.required_phase(geometry, tgt, m + 1, 3)
            assert (b - a) % 360.0 == pytest.approx(step % 360.0, abs=1e-9)

    def test_against_oracle(self, geometry):
        rng = np.random.default_rng(11)
        for _ in range(40):
            theta = float(rng.uniform(0.0, 89.9))
            phi = float(rng.uniform(0.0, 360.0))
            m = int(rng.integers(1, geometry.n_cols + 1))
            n = int(rng.integers(1, geometry.n_rows + 1))
            tgt = ms.SteeringTarget(theta, phi)
            expected = naive_required_phase(
                geometry.wavelength_m, geometry.cell_size_m, theta, phi, m, n
            )
            got = ms.required_phase(geometry, tgt, m, n)
            assert ms.circular_phase_distance(got, expected) < 1e-9

    @pytest.mark.parametrize("m,n", [(0, 1), (1, 0), (16, 1), (1, 16), (-1, 3)])
    def test_indices_one_based_and_bounded(self, geometry, m, n):
        tgt = ms.SteeringTarget(45.0, 45.0)
        with pytest.raises(ValueError):
            ms.required_phase(geometry, tgt, m, n)

    def test_grid_matches_scalar(self, geometry, target):
        grid = ms.required_phase_grid(geometry, target)
        assert grid.shape == (geometry.n_rows, geometry.n_cols)
        for n in (1, 8, 15):
            for m in (1, 8, 15):
                assert grid[n - 1, m - 1] == pytest.approx(
                    ms.required_phase(geometry, target, m, n), abs=1e-9
                )


class TestGenerateCoding:
    def test_state_snap_examples(self, palette):
        assert palette.nearest_state(53.0) == 0
        assert palette.nearest_state(188.0) == 2

    def test_broadside_uniform(self, geometry, palette):
        coding = ms.generate_coding(geometry, ms.SteeringTarget(0.0, 0.0), palette)
        assert (coding.cells == 0).all()

    def test_deterministic(self, geometry, target, palette):
        a = ms.generate_coding(geometry, target, palette)
        b = ms.generate_coding(geometry, target, palette)
        assert (a.cells == b.cells).all()

    def test_cells_in_range(self, coding, palette):
        assert coding.cells.min() >= 0
        assert coding.cells.max() < len(palette)
        assert coding.cells.dtype == np.int64

    def test_every_cell_snaps_nearest(self, geometry, target, palette, coding):
        req = ms.required_phase_grid(geometry, target)
        for n in range(geometry.n_rows):
            for m in range(geometry.n_cols):
                assert coding.cells[n, m] == palette.nearest_state(req[n, m])

    def test_snap_error_bounded(self, geometry, target, palette, coding):
        req = ms.required_phase_grid(geometry, target)
        phases = np.array([s.phi_deg for s in palette.states])
        chosen = phases[coding.cells]
        d = np.abs(req - chosen) % 360.0
        d = np.minimum(d, 360.0 - d)
        assert d.max() <= 45.0 + 1e-9

    def test_diagonal_symmetry_at_45(self, coding):
        # phi=45 weights m and n equally, so the coding is symmetric
        # about the main diagonal
        assert (coding.cells == coding.cells.T).all()

    def test_cells_read_only(self, coding):
        with pytest.raises(ValueError):
            coding.cells[0, 0] = 3

    def test_invalid_cells_rejected(self, geometry, target):
        cells = np.zeros((15, 15), dtype=np.int64)
        cells[0, 0] = 7
        with pytest.raises(ValueError):
            ms.CodingGrid(geometry, target, cells, n_states=4)

    def test_shape_mismatch_rejected(self, geometry, target):
        with pytest.raises(ValueError):
            ms.CodingGrid(
                geometry, target, np.zeros((3, 3), dtype=np.int64), n_states=4
            )


class TestCodingIO:
    def test_round_trip(self, tmp_path, coding, palette):
        path = tmp_path / "coding.yaml"
        ms.save_coding(coding, palette, path)
        loaded, loaded_palette = ms.load_coding(path)
        assert (loaded.cells == coding.cells).all()
        assert loaded.geometry == coding.geometry
        assert loaded.target == coding.target
        assert loaded_palette == palette

    def test_malformed_rejected(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("geometry: {n_rows: 2}\n")
        with pytest.raises(ValueError):
            ms.load_coding(path)
