import os

import numpy as np
import pytest
import yaml

import mssim as ms
from mssim.cli import main


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture()
def coding_file(workdir):
    assert main(["code", "--nx", "15", "--ny", "15", "--theta", "45", "--phi", "45",
                 "-o", "coding.yaml"]) == 0
    return workdir / "coding.yaml"


class TestVersionAndUsage:
    def test_version(self, capsys):
        assert main(["--version"]) == 0
        out = capsys.readouterr().out
        assert out.strip() == f"mssim {ms.__version__}"

    def test_no_command_is_usage_error(self):
        assert main([]) == 1

    def test_unknown_command(self):
        assert main(["bogus"]) == 1

    def test_unknown_flag(self):
        assert main(["code", "--wat", "-o", "x.yaml"]) == 1


class TestCode:
    def test_writes_document(self, workdir, coding_file):
        coding, palette = ms.load_coding(coding_file)
        assert coding.cells.shape == (15, 15)
        assert len(palette) == 4
        assert (workdir / "coding.yaml.manifest.yaml").exists()

    def test_rectangular(self, workdir):
        assert main(["code", "--nx", "8", "--ny", "4", "--theta", "30", "--phi", "0",
                     "-o", "r.yaml"]) == 0
        coding, _ = ms.load_coding(workdir / "r.yaml")
        # ny rows, nx columns
        assert coding.cells.shape == (4, 8)

    def test_broadside_uniform(self, workdir):
        assert main(["code", "--nx", "5", "--ny", "5", "--theta", "0", "--phi", "0",
                     "-o", "u.yaml"]) == 0
        coding, _ = ms.load_coding(workdir / "u.yaml")
        assert (coding.cells == 0).all()

    def test_invalid_theta_usage_error(self, workdir):
        assert main(["code", "--nx", "5", "--ny", "5", "--theta", "95", "--phi", "0",
                     "-o", "x.yaml"]) == 1

    def test_missing_output_flag(self, workdir):
        assert main(["code", "--nx", "5", "--ny", "5"]) == 1


class TestPattern:
    def test_golden_argmax_near_target(self, workdir, coding_file):
        assert main(["pattern", "coding.yaml", "-o", "p.csv"]) == 0
        pat = ms.read_pattern_csv(workdir / "p.csv")
        i, j = np.unravel_index(np.argmax(pat.magnitude), pat.magnitude.shape)
        assert abs(float(pat.grid.theta_deg[i]) - 45.0) <= 2.0
        assert abs(float(pat.grid.phi_deg[j]) - 45.0) <= 2.0

    def test_reruns_byte_identical(self, workdir, coding_file):
        assert main(["pattern", "coding.yaml", "-o", "a.csv"]) == 0
        assert main(["pattern", "coding.yaml", "-o", "b.csv"]) == 0
        assert (workdir / "a.csv").read_bytes() == (workdir / "b.csv").read_bytes()

    def test_injected_reruns_byte_identical(self, workdir, coding_file):
        args = ["pattern", "coding.yaml", "--inject", "det,clu,0.3,seed=7"]
        assert main(args + ["-o", "a.csv"]) == 0
        assert main(args + ["-o", "b.csv"]) == 0
        assert (workdir / "a.csv").read_bytes() == (workdir / "b.csv").read_bytes()

    def test_inject_needs_seed(self, workdir, coding_file):
        assert main(["pattern", "coding.yaml", "--inject", "det,clu,0.3",
                     "-o", "x.csv"]) == 1

    def test_long_form_scenario_flags(self, workdir, coding_file):
        assert main(["pattern", "coding.yaml", "--type", "det", "--dist", "clu",
                     "--rate", "0.3", "--seed", "7", "-o", "long.csv"]) == 0
        assert main(["pattern", "coding.yaml", "--inject", "det,clu,0.3,seed=7",
                     "-o", "compact.csv"]) == 0
        assert (workdir / "long.csv").read_bytes() == (workdir / "compact.csv").read_bytes()

    def test_acronym_inject_spec(self, workdir, coding_file):
        assert main(["pattern", "coding.yaml", "--inject", "CD,0.3,seed=7",
                     "-o", "acr.csv"]) == 0
        assert main(["pattern", "coding.yaml", "--inject", "det,clu,0.3,seed=7",
                     "-o", "tok.csv"]) == 0
        assert (workdir / "acr.csv").read_bytes() == (workdir / "tok.csv").read_bytes()

    def test_metrics_sidecar(self, workdir, coding_file):
        assert main(["pattern", "coding.yaml", "-o", "p.csv",
                     "--metrics", "m.csv"]) == 0
        lines = (workdir / "m.csv").read_text().splitlines()
        assert lines[0] == ms.METRICS_CSV_HEADER
        assert len(lines) == 2

    def test_missing_coding_is_runtime_error(self, workdir):
        assert main(["pattern", "nope.yaml", "-o", "x.csv"]) == 2


class TestInject:
    def test_realization_document(self, workdir, coding_file):
        assert main(["inject", "coding.yaml", "--inject", "out,ind,0.2,seed=5",
                     "-o", "fault.yaml"]) == 0
        doc = yaml.safe_load((workdir / "fault.yaml").read_text())
        assert doc["kind"] == "mssim-fault-realization"
        assert len(doc["cells"]) == ms.faulty_cell_count(0.2, 225)
        assert doc["emergent_rate"] == pytest.approx(len(doc["cells"]) / 225)
        for cell in doc["cells"]:
            assert 0 <= cell["row"] < 15 and 0 <= cell["col"] < 15
            assert 0.0 <= cell["gamma"] <= 1.0
            assert 0.0 <= cell["phi_deg"] < 360.0

    def test_needs_scenario(self, workdir, coding_file):
        assert main(["inject", "coding.yaml", "-o", "fault.yaml"]) == 1

    def test_optional_pattern_output(self, workdir, coding_file):
        assert main(["inject", "coding.yaml", "--inject", "det,clu,0.3,seed=7",
                     "-o", "fault.yaml", "--pattern", "fp.csv"]) == 0
        pat = ms.read_pattern_csv(workdir / "fp.csv")
        assert pat.magnitude.shape == (91, 360)


class TestMetrics:
    def test_table_and_csv(self, workdir, coding_file, capsys):
        assert main(["pattern", "coding.yaml", "-o", "p.csv"]) == 0
        capsys.readouterr()
        assert main(["metrics", "p.csv", "--theta", "45", "--phi", "45",
                     "-o", "m.csv"]) == 0
        out = capsys.readouterr().out
        assert "td_deg" in out and "hpbw_deg" in out
        lines = (workdir / "m.csv").read_text().splitlines()
        assert lines[0] == ms.METRICS_CSV_HEADER
        row = lines[1].split(",")
        assert row[0] == "NA"
        assert float(row[3]) < 2.0  # td of the fault-free pattern

    def test_sla_convention_flag(self, workdir, coding_file):
        assert main(["pattern", "coding.yaml", "-o", "p.csv"]) == 0
        assert main(["metrics", "p.csv", "--theta", "45", "--phi", "45",
                     "--sla-convention", "peak_sum", "-o", "m1.csv"]) == 0
        assert main(["metrics", "p.csv", "--theta", "45", "--phi", "45",
                     "-o", "m2.csv"]) == 0
        sla1 = float((workdir / "m1.csv").read_text().splitlines()[1].split(",")[8])
        sla2 = float((workdir / "m2.csv").read_text().splitlines()[1].split(",")[8])
        assert sla1 != sla2


class TestSweep:
    def test_small_sweep(self, workdir, capsys):
        assert main(["sweep", "--scenarios", "CD,IB", "--rates", "0:0.2:0.1",
                     "--trials", "2", "--seed", "3", "-o", "sweep.csv",
                     "--trials-csv", "trials.csv"]) == 0
        lines = (workdir / "sweep.csv").read_text().splitlines()
        assert lines[0] == "scenario,rate,metric,mean,std,min,max,n,flagged"
        assert len(lines) == 1 + 2 * 3 * 8  # scenarios x rates x metrics
        trials = (workdir / "trials.csv").read_text().splitlines()
        assert len(trials) == 1 + 2 * 3 * 2
        manifest = yaml.safe_load((workdir / "sweep.csv.manifest.yaml").read_text())
        assert manifest["plan"]["root_seed"] == 3
        assert manifest["tool"]["name"] == "mssim"

    def test_rates_comma_list(self, workdir):
        assert main(["sweep", "--scenarios", "ID", "--rates", "0.1,0.3",
                     "--trials", "1", "--seed", "3", "-o", "s.csv"]) == 0
        lines = (workdir / "s.csv").read_text().splitlines()
        assert len(lines) == 1 + 2 * 8

    def test_seed_required(self, workdir):
        assert main(["sweep", "--scenarios", "ID", "--rates", "0.1",
                     "--trials", "1", "-o", "s.csv"]) == 1

    def test_jobs_equivalent(self, workdir):
        base = ["sweep", "--scenarios", "ID", "--rates", "0:0.2:0.1",
                "--trials", "2", "--seed", "11"]
        assert main(base + ["-o", "s1.csv", "--jobs", "1"]) == 0
        assert main(base + ["-o", "s2.csv", "--jobs", "2"]) == 0
        assert (workdir / "s1.csv").read_bytes() == (workdir / "s2.csv").read_bytes()


class TestGolden:
    def test_prints_table(self, workdir, capsys):
        assert main(["golden"]) == 0
        out = capsys.readouterr().out
        assert "golden reference (15x15" in out
        assert "td_deg" in out
        assert "sll_db" in out

    def test_optional_csv(self, workdir):
        assert main(["golden", "-o", "g.csv"]) == 0
        lines = (workdir / "g.csv").read_text().splitlines()
        assert lines[0] == ms.METRICS_CSV_HEADER
        assert lines[1].startswith("GOLD,0.0,0,1.25,")


class TestConfigFile:
    def test_config_supplies_defaults(self, workdir):
        (workdir / "run.yaml").write_text("nx: 5\nny: 5\ntheta: 30\nphi: 0\n")
        assert main(["code", "--config", "run.yaml", "-o", "c.yaml"]) == 0
        coding, _ = ms.load_coding(workdir / "c.yaml")
        assert coding.cells.shape == (5, 5)
        assert coding.target.theta_deg == 30.0

    def test_flags_override_config(self, workdir):
        (workdir / "run.yaml").write_text("nx: 5\nny: 5\ntheta: 30\nphi: 0\n")
        assert main(["code", "--config", "run.yaml", "--theta", "10",
                     "-o", "c.yaml"]) == 0
        coding, _ = ms.load_coding(workdir / "c.yaml")
        assert coding.target.theta_deg == 10.0

    def test_missing_config_is_runtime_error(self, workdir):
        assert main(["code", "--config", "nope.yaml", "-o", "c.yaml"]) == 2
