"""Experiment runner: config handling, CSV reports, sweeps, CLI, validation."""

import os
import subprocess
import sys

import numpy as np
import pytest

from snratio.cli import main
from snratio.errors import ParameterDomainError
from snratio.experiments import (
    ExperimentConfig,
    check_figure3,
    parse_config_file,
    read_csv,
    run_ccdf_dump,
    run_figure3,
    run_figure4,
    run_figure5,
    run_laplace_dump,
    validate,
    write_csv,
)


class TestConfig:
    def test_defaults_are_valid(self):
        cfg = ExperimentConfig()
        assert cfg.helper_density == 0.1
        assert cfg.alphas == (3.0, 4.0)
        assert cfg.n_files == 50
        assert cfg.theta == 5.0

    def test_rejects_invalid(self):
        with pytest.raises(ParameterDomainError):
            ExperimentConfig(gamma_grid=())
        with pytest.raises(ParameterDomainError):
            ExperimentConfig(alphas=(1.5,))
        with pytest.raises(ParameterDomainError):
            ExperimentConfig(trials=0)

    def test_hash_ignores_output_location(self):
        a = ExperimentConfig(out_dir="x")
        b = ExperimentConfig(out_dir="y")
        c = ExperimentConfig(seed=99)
        assert a.hash() == b.hash()
        assert a.hash() != c.hash()

    def test_config_file_parsing(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(
            "# comment\n"
            "trials = 123\n"
            "alphas = 3.0, 4.0\n"
            "gamma_grid = 0 1 2\n"
            "out_dir = results\n")
        values = parse_config_file(str(path))
        assert values == {"trials": 123, "alphas": (3.0, 4.0),
                          "gamma_grid": (0.0, 1.0, 2.0), "out_dir": "results"}

    def test_config_file_rejects_unknown_key(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("no_such_knob = 1\n")
        with pytest.raises(ParameterDomainError):
            parse_config_file(str(path))


class TestCsvRoundTrip:
    def test_write_then_read(self, tmp_path):
        path = str(tmp_path / "t.csv")
        meta = {"config_hash": "abc", "seed": 7}
        header = ["gamma", "method", "value"]
        rows = [(0.5, "sim", 0.123456789123), (3.0, "bound", float("nan"))]
        write_csv(path, meta, header, rows)
        meta2, header2, rows2 = read_csv(path)
        assert meta2["config_hash"] == "abc" and meta2["seed"] == "7"
        assert header2 == header
        assert rows2[0]["gamma"] == 0.5
        assert rows2[0]["method"] == "sim"
        assert rows2[0]["value"] == pytest.approx(0.123456789, rel=1e-9)
        assert np.isnan(rows2[1]["value"])

    def test_nine_significant_digits(self, tmp_path):
        path = str(tmp_path / "d.csv")
        write_csv(path, {}, ["v"], [(0.123456789123456,)])
        body = [l for l in open(path) if not l.startswith("#")]
        assert body[1].strip() == "0.123456789"


def tiny_config(**kw):
    base = dict(trials=2000, batch_samples=4000, seed=5,
                gamma_grid=(0.0, 3.0), n_files=10,
                fig4_n_files=(5, 20), fig5_n_files=(5, 20))
    base.update(kw)
    return ExperimentConfig(**base)


class TestSweeps:
    def test_figure3_rows_and_ordering(self):
        header, rows = run_figure3(tiny_config())
        methods = {r[2] for r in rows}
        assert {"sim_aligned", "sim_baseline", "upper_bound", "lower_bound"} <= methods
        # one row set per (gamma, alpha); rows sorted by construction
        keys = [(r[0], r[1]) for r in rows]
        assert keys == sorted(keys, key=lambda t: (t[0], t[1], 0))
        assert check_figure3(rows) == []

    def test_figure3_gain_present_on_aligned_rows(self):
        _, rows = run_figure3(tiny_config(gamma_grid=(3.0,), alphas=(4.0,)))
        aligned = [r for r in rows if r[2] == "sim_aligned"]
        assert len(aligned) == 1 and aligned[0][6] > 1.0

    @pytest.mark.filterwarnings("ignore::snratio.errors.MomentReliabilityWarning")
    def test_figure4_has_overlays(self):
        # The series overlay deliberately runs into shaky high moments on
        # part of the grid; the warnings are the designed flagging behavior.
        _, rows = run_figure4(tiny_config(gamma_grid=(1.0,), alphas=(4.0,)))
        by_method = {r[3] for r in rows}
        assert by_method == {"sim_aligned", "expectation_form", "series_form"}
        sims = {(r[0], r[2]): r[4] for r in rows if r[3] == "sim_aligned"}
        closed = {(r[0], r[2]): r[4] for r in rows if r[3] == "expectation_form"}
        for key in sims:
            assert sims[key] == pytest.approx(closed[key], abs=0.05)

    def test_figure5_approximation_follows_simulation(self):
        _, rows = run_figure5(tiny_config(trials=20_000, gamma_grid=(0.0, 3.0),
                                          fig5_n_files=(5,)))
        for r in rows:
            assert abs(r[6]) < 0.25  # coarse at these trial counts

    def test_figure4_database_size_effect(self):
        # Fewer files help at low skew; at high skew the curves merge.
        import math

        cfg = tiny_config(trials=10_000, gamma_grid=(0.0, 3.0), alphas=(4.0,),
                          fig4_n_files=(20, 50))
        _, rows = run_figure4(cfg)
        sims = {(r[0], r[2]): (r[4], r[5]) for r in rows if r[3] == "sim_aligned"}
        low_small, low_large = sims[(0.0, 20)], sims[(0.0, 50)]
        assert low_small[0] > low_large[0] + 3.0 * math.hypot(low_small[1], low_large[1])
        hi_small, hi_large = sims[(3.0, 20)], sims[(3.0, 50)]
        assert abs(hi_small[0] - hi_large[0]) <= 3.0 * math.hypot(hi_small[1], hi_large[1])

    def test_ccdf_dump_consistent(self):
        header, rows = run_ccdf_dump(4.0, 1.0, [0.5, 1.0, 4.0])
        assert header == ["x", "ccdf", "ccdf_via_stable"]
        for _, a, b in rows:
            assert a == pytest.approx(b, abs=1e-10)

    def test_laplace_dump_marks_divergence(self):
        _, rows = run_laplace_dump(4.0, 5.0, [0.1, 1e4])
        assert np.isnan(rows[0][1])
        assert rows[1][1] > 0.0


class TestValidateSuite:
    def test_default_passes(self):
        ok, report = validate(tiny_config(trials=20_000))
        assert ok, report
        lines = report.splitlines()
        assert sum(line.startswith("PASS ") for line in lines) == 7
        assert "ALL CHECKS PASSED" in report

    def test_corrupted_tolerance_fails_mc_agreement(self):
        ok, report = validate(tiny_config(trials=100, mc_tol=1e-30))
        assert not ok
        assert "FAIL mc_ratio_agreement" in report

    def test_report_is_deterministic(self):
        cfg = tiny_config(trials=5000)
        assert validate(cfg)[1] == validate(cfg)[1]


class TestCli:
    def test_fig3_writes_csv_and_plot_script(self, tmp_path, capsys):
        out = str(tmp_path / "o")
        code = main(["fig3", "--gamma-grid", "3.0", "--alpha", "4", "--trials", "2000",
                     "--n-files", "10", "--seed", "3", "--out-dir", out, "--validate"])
        assert code == 0
        meta, header, rows = read_csv(os.path.join(out, "fig3.csv"))
        assert meta["seed"] == "3"
        assert header[0] == "gamma"
        assert rows
        assert os.path.exists(os.path.join(out, "fig3_plot.py"))

    def test_flags_override_config_file(self, tmp_path):
        cfg_file = tmp_path / "c.cfg"
        cfg_file.write_text("trials = 1000\nseed = 1\nn_files = 4\n")
        out = str(tmp_path / "o2")
        code = main(["ccdf", "--config", str(cfg_file), "--seed", "9",
                     "--out-dir", out, "--x-grid", "1.0"])
        assert code == 0
        meta, _, _ = read_csv(os.path.join(out, "ccdf.csv"))
        assert meta["seed"] == "9"       # flag wins
        assert meta["trials"] == "1000"  # file wins over default
        assert meta["n_files"] == "4"

    def test_validate_seed_42_reports_byte_identical(self, tmp_path):
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        small = ["--trials", "4000", "--batch-samples", "4000"]
        assert main(["validate", "--seed", "42", "--out-dir", out1] + small) == 0
        assert main(["validate", "--seed", "42", "--out-dir", out2] + small) == 0
        r1 = open(os.path.join(out1, "validate_report.txt"), "rb").read()
        r2 = open(os.path.join(out2, "validate_report.txt"), "rb").read()
        assert r1 == r2

    def test_validate_corrupted_tolerance_exits_one(self, tmp_path):
        code = main(["validate", "--seed", "42", "--trials", "100",
                     "--mc-tol", "1e-30", "--out-dir", str(tmp_path / "v")])
        assert code == 1

    def test_configuration_error_exits_two(self, tmp_path):
        code = main(["fig3", "--alpha", "1.5", "--out-dir", str(tmp_path / "x")])
        assert code == 2

    def test_missing_config_file_exits_two(self, tmp_path):
        code = main(["fig3", "--config", str(tmp_path / "nope.cfg")])
        assert code == 2

    def test_laplace_subcommand(self, tmp_path):
        out = str(tmp_path / "lp")
        code = main(["laplace", "--alpha", "4", "--ratio", "0.1",
                     "--s-grid", "1.0,100.0", "--out-dir", out])
        assert code == 0
        _, _, rows = read_csv(os.path.join(out, "laplace.csv"))
        assert rows[0]["laplace"] == pytest.approx(0.056141, abs=1e-5)

    def test_console_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "snratio.cli", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "fig3" in proc.stdout
