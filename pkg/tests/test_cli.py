# tests/test_cli.py
"""
End-to-end tests of the fptclock command line.
"""

import json
import math
import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from fptclock.cli.fpt import main
from fptclock.storage.gridfile import read_grid, write_grid
from fptclock.wiener.one_sided import levy_cdf


class TestCommandLine:
    """forward / inverse / simulate through files"""

    def setup_method(self):
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def path(self, name: str) -> str:
        return str(self.temp_dir / name)

    def grid(self, name: str, t) -> str:
        return str(write_grid(self.temp_dir / name, ("t",), t))

    def error_line(self, capsys) -> dict:
        return json.loads(capsys.readouterr().err.strip().splitlines()[-1])

    # ---------- forward ----------

    def test_forward_identity_at_one(self):
        out = self.path("fwd.csv")
        code = main(["forward", "--clock", "identity", "--boundary-upper", "1",
                     "--grid", self.grid("grid.csv", [1.0]), "--out", out])
        assert code == 0
        table = read_grid(out, "target")
        assert table.columns == ("t", "cdf", "pdf")
        assert table.column("cdf")[0] == pytest.approx(0.31731050786291415, rel=1e-15)

    def test_forward_at_zero(self):
        out = self.path("fwd.csv")
        assert main(["forward", "--clock", "identity", "--boundary-upper", "1",
                     "--grid", self.grid("grid.csv", [0.0]), "--out", out]) == 0
        assert read_grid(out, "target").column("cdf")[0] == 0.0

    def test_forward_two_sided_linear_clock(self):
        out = self.path("fwd.csv")
        assert main(["forward", "--clock", "linear:2", "--boundary-upper", "1", "--boundary-lower", "-1",
                     "--grid", self.grid("grid.csv", [0.0, 0.5, 1.0]), "--out", out]) == 0
        cdf = read_grid(out, "target").column("cdf")
        assert np.all(np.diff(cdf) > 0)

    def test_malformed_grid_exits_2_without_output(self, capsys):
        bad = self.temp_dir / "bad.csv"
        bad.write_text("t\n0\nnot-a-number\n")
        out = self.temp_dir / "fwd.csv"
        code = main(["forward", "--clock", "identity", "--boundary-upper", "1",
                     "--grid", str(bad), "--out", str(out)])
        assert code == 2
        assert not out.exists()
        line = self.error_line(capsys)
        assert line["error"] == "GridFormatError"
        assert line["exit_code"] == 2
        assert "bad.csv:3:" in line["message"]

    def test_invalid_boundary_exits_2(self, capsys):
        code = main(["forward", "--clock", "identity", "--boundary-upper", "-1",
                     "--grid", self.grid("grid.csv", [1.0]), "--out", self.path("fwd.csv")])
        assert code == 2
        assert self.error_line(capsys)["error"] == "ValidationError"

    def test_series_budget_exceeded_exits_4(self, capsys):
        config = self.temp_dir / "run.json"
        config.write_text(json.dumps({
            "clock": "identity",
            "boundary_upper": 1.0,
            "boundary_lower": -1.0,
            "grid": self.grid("grid.csv", [0.5, 1.0]),
            "out": self.path("fwd.csv"),
            "series": {"max_terms": 1},
        }))
        assert main(["forward", "--config", str(config)]) == 4
        line = self.error_line(capsys)
        assert line["error"] == "ConvergenceError"
        assert line["exit_code"] == 4
        assert not (self.temp_dir / "fwd.csv").exists()

    # ---------- inverse ----------

    def test_inverse_of_levy_target_is_identity(self):
        t = np.linspace(0.0, 5.0, 101)
        target = write_grid(self.temp_dir / "target.csv", ("t", "cdf"), t, levy_cdf(1.0, t))
        out = self.path("clock.csv")
        assert main(["inverse", "--target", str(target), "--boundary-upper", "1", "--out", out]) == 0

        clock = read_grid(out, "clock")
        assert clock.columns == ("t", "v")
        np.testing.assert_allclose(clock.column("v"), t, atol=1e-8)

        report = json.loads((self.temp_dir / "clock.report.json").read_text())
        assert report["assumption_k1_infinite"] is True
        assert report["thresholds"]["k1"] is None
        assert report["n_knots"] == 101

    def test_inverse_exponential_target_at_median(self):
        t = np.array([0.0, math.log(2.0), 1.0, 2.0])
        target = write_grid(self.temp_dir / "target.csv", ("t", "value"), t, -np.expm1(-t))
        out = self.path("clock.csv")
        assert main(["inverse", "--target", str(target), "--boundary-upper", "1", "--out", out]) == 0
        assert read_grid(out, "clock").column("v")[1] == pytest.approx(2.1981, abs=1e-4)

    def test_inverse_finite_k1_exits_3_with_report(self, capsys):
        target = write_grid(self.temp_dir / "target.csv", ("t", "cdf"), [0.0, 1.0, 2.0], [0.0, 0.5, 1.0])
        report = self.temp_dir / "report.json"
        code = main(["inverse", "--target", str(target), "--boundary-upper", "1",
                     "--out", self.path("clock.csv"), "--report", str(report)])
        assert code == 3
        assert json.loads(report.read_text())["assumption_k1_infinite"] is False
        assert self.error_line(capsys)["error"] == "AssumptionError"
        assert not (self.temp_dir / "clock.csv").exists()

    def test_forward_then_inverse_round_trip(self):
        t = np.linspace(0.0, 3.0, 31)
        v = np.interp(t, [0.0, 1.0, 2.0, 3.0], [0.0, 2.0, 2.5, 5.5])
        clock_file = write_grid(self.temp_dir / "clock_in.csv", ("t", "v"), t, v)
        fwd = self.path("fwd.csv")
        assert main(["forward", "--clock", str(clock_file), "--boundary-upper", "1", "--out", fwd]) == 0

        out = self.path("clock_out.csv")
        assert main(["inverse", "--target", fwd, "--boundary-upper", "1", "--out", out]) == 0
        solved = read_grid(out, "clock")
        assert solved.columns == ("t", "v", "sigma2")
        np.testing.assert_allclose(solved.column("v"), v, atol=1e-8)

    # ---------- simulate ----------

    def simulate_args(self, out: str, *extra: str):
        return ["simulate", "--clock", "identity", "--boundary-upper", "1", "--horizon", "1",
                "--clock-steps", "50", "--out", out, *extra]

    def test_simulate_is_byte_identical_for_a_seed(self):
        first, second = self.path("a.csv"), self.path("b.csv")
        assert main(self.simulate_args(first, "--paths", "2000", "--seed", "5")) == 0
        assert main(self.simulate_args(second, "--paths", "2000", "--seed", "5", "--workers", "3")) == 0
        assert Path(first).read_bytes() == Path(second).read_bytes()
        assert (self.temp_dir / "a.summary.json").read_bytes() == (self.temp_dir / "b.summary.json").read_bytes()

    def test_simulate_single_path_is_one_step(self):
        out = self.path("one.csv")
        crossings = self.path("crossings.csv")
        assert main(self.simulate_args(out, "--paths", "1", "--seed", "3", "--crossings", crossings)) == 0
        table = read_grid(out, "simulation")
        values = table.column("empirical_cdf")
        assert set(np.unique(values)) <= {0.0, 1.0}
        assert np.all(np.diff(values) >= 0)
        # header plus one row per crossing
        rows = Path(crossings).read_text(encoding="utf-8").splitlines()
        assert rows[0] == "time,side"
        assert len(rows) - 1 == values[-1]

    def test_simulate_compare_writes_ks(self):
        out = self.path("sim.csv")
        args = ["simulate", "--clock", "identity", "--boundary-upper", "1", "--horizon", "4",
                "--clock-steps", "200", "--paths", "100000", "--seed", "1", "--compare", "--out", out]
        assert main(args) == 0
        assert read_grid(out, "simulation").columns == ("t", "empirical_cdf", "analytic_cdf")
        summary = json.loads((self.temp_dir / "sim.summary.json").read_text())
        assert summary["ks_distance"] <= 0.01
        assert summary["crossings"] + summary["censored_count"] == 100000
        assert summary["boundary_kinds"] == ["one_sided"]

    def test_simulate_requires_paths(self, capsys):
        assert main(self.simulate_args(self.path("sim.csv"))) == 2
        assert self.error_line(capsys)["error"] == "DomainError"

    # ---------- config files ----------

    def test_config_file_with_flag_override(self):
        config = self.temp_dir / "run.json"
        config.write_text(json.dumps({
            "clock": "identity",
            "boundary_upper": 5.0,
            "grid": self.grid("grid.csv", [1.0]),
            "out": self.path("fwd.csv"),
        }))
        assert main(["forward", "--config", str(config), "--boundary-upper", "1"]) == 0
        cdf = read_grid(self.path("fwd.csv"), "target").column("cdf")[0]
        assert cdf == pytest.approx(0.31731050786291415, rel=1e-15)

    def test_unknown_config_key_exits_2(self, capsys):
        config = self.temp_dir / "run.json"
        config.write_text(json.dumps({"clock": "identity", "seeds": 3}))
        assert main(["forward", "--config", str(config)]) == 2
        assert self.error_line(capsys)["exit_code"] == 2

    def test_scenario_forward_is_weighted_sum(self):
        config = self.temp_dir / "run.json"
        config.write_text(json.dumps({
            "grid": self.grid("grid.csv", [0.5, 1.0, 2.0]),
            "out": self.path("mix.csv"),
            "scenarios": [
                {"weight": 0.25, "clock": "identity", "boundary_upper": 1.0},
                {"weight": 0.75, "clock": "linear:4", "boundary_upper": 2.0},
            ],
        }))
        assert main(["forward", "--config", str(config)]) == 0
        t = np.array([0.5, 1.0, 2.0])
        expected = 0.25 * levy_cdf(1.0, t) + 0.75 * levy_cdf(2.0, 4.0 * t)
        np.testing.assert_allclose(read_grid(self.path("mix.csv"), "target").column("cdf"), expected, rtol=1e-13)

    def test_scenario_inverse_writes_one_file_per_scenario(self):
        t = np.linspace(0.0, 4.0, 41)
        first = write_grid(self.temp_dir / "f0.csv", ("t", "cdf"), t, levy_cdf(1.0, t))
        second = write_grid(self.temp_dir / "f1.csv", ("t", "cdf"), t, -np.expm1(-t))
        config = self.temp_dir / "run.json"
        config.write_text(json.dumps({
            "out": self.path("solved.csv"),
            "scenarios": [
                {"weight": 0.5, "boundary_upper": 2.0, "target": str(first)},
                {"weight": 0.5, "boundary_upper": 1.0, "target": str(second)},
            ],
        }))
        assert main(["inverse", "--config", str(config)]) == 0
        clock0 = read_grid(self.path("solved.scenario0.csv"), "clock").column("v")
        assert (self.temp_dir / "solved.scenario1.csv").exists()
        # levy_cdf(1, t) against g = 2 needs <Z> = 4t
        np.testing.assert_allclose(clock0, 4.0 * t, atol=1e-8)
        report = json.loads((self.temp_dir / "solved.report.json").read_text())
        assert [r["scenario_index"] for r in report["scenarios"]] == [0, 1]
