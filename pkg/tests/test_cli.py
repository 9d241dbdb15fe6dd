import json
import math
import subprocess
import sys

import pytest

from jonq.cli import main

FAST = ["--n", "400", "--samples", "4", "--seed", "1"]


def run(tmp_path, name, argv):
    out = tmp_path / name
    rc = main(argv + ["--out", str(out)])
    return rc, out


class TestLyapunovCommand:
    def test_single_rho_csv(self, tmp_path):
        rc, out = run(
            tmp_path, "a.csv",
            ["lyapunov", "--kind", "jonquieres_b", "--rho", "4.0"] + FAST,
        )
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# config: ")
        cfg = json.loads(lines[0][len("# config: "):])
        assert cfg["kind"] == "jonquieres_b" and cfg["seed"] == 1
        header = lines[1].split(",")
        assert header == ["kind", "alpha_angle", "freq", "rho", "ln_rho", "L",
                          "stderr", "half_n_L", "n", "samples", "seed"]
        row = lines[2].split(",")
        assert float(row[3]) == 4.0
        assert abs(float(row[5]) - math.log(4)) < 0.05

    def test_sweep_row_count(self, tmp_path):
        rc, out = run(
            tmp_path, "b.csv",
            ["lyapunov", "--kind", "jonquieres_b", "--s-min", "-1", "--s-max", "1",
             "--s-steps", "5"] + FAST,
        )
        assert rc == 0
        assert len(out.read_text().splitlines()) == 2 + 5

    def test_byte_reproducibility(self, tmp_path):
        argv = ["lyapunov", "--kind", "btilde", "--rho", "2.0"] + FAST
        _, out1 = run(tmp_path, "c1.csv", argv)
        _, out2 = run(tmp_path, "c2.csv", argv)
        assert out1.read_bytes() == out2.read_bytes()

    def test_btilde_unit_radius_is_config_error(self, tmp_path):
        rc, _ = run(tmp_path, "d.csv",
                    ["lyapunov", "--kind", "btilde", "--rho", "1.0"] + FAST)
        assert rc == 2

    def test_resonant_freq_is_config_error(self, tmp_path):
        rc, _ = run(tmp_path, "e.csv",
                    ["lyapunov", "--kind", "jonquieres_b", "--rho", "2.0",
                     "--freq", "0.5"] + FAST)
        assert rc == 2

    def test_branch_failure_is_numeric_error(self, tmp_path):
        # one ulp above the unit circle: the square-root branch cannot be
        # tracked at double precision
        rc, _ = run(tmp_path, "e2.csv",
                    ["lyapunov", "--kind", "btilde",
                     "--rho", "1.0000000000000002"] + FAST)
        assert rc == 3


class TestAccelCommand:
    def test_columns_and_values(self, tmp_path):
        rc, out = run(
            tmp_path, "f.csv",
            ["accel", "--kind", "diagonal_power", "--rho", "1.0",
             "--n", "2000", "--samples", "8", "--seed", "0"],
        )
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[1].split(",") == ["rho", "omega", "nearest_integer",
                                       "distance", "left_slope", "right_slope",
                                       "regular_flag"]
        row = lines[2].split(",")
        assert abs(float(row[1]) - 1.0) < 0.05
        assert int(row[2]) == 1
        assert row[6] == "0"  # kinked at rho = 1: not regular

    def test_reproducible(self, tmp_path):
        argv = ["accel", "--kind", "btilde", "--rho", "2.0",
                "--n", "1000", "--samples", "8", "--seed", "5"]
        _, out1 = run(tmp_path, "g1.csv", argv)
        _, out2 = run(tmp_path, "g2.csv", argv)
        assert out1.read_bytes() == out2.read_bytes()


class TestOrbitCommand:
    def test_rows_and_constant_modulus(self, tmp_path):
        rc, out = run(
            tmp_path, "h.csv",
            ["orbit", "--x0", "0.01+0j", "--y0", "0.01+0j", "--n", "50"],
        )
        assert rc == 0
        lines = out.read_text().splitlines()
        rows = [l.split(",") for l in lines[2:]]
        assert len(rows) == 51
        mods = {row[6] for row in rows}
        assert all(abs(float(m) - 0.01) < 1e-12 for m in mods)

    def test_passage_through_infinity(self, tmp_path):
        # start mapped exactly onto x = -1, so step 2 is at infinity
        import cmath

        from jonq.algebra import DEFAULT_ALPHA_ANGLE

        alpha = cmath.exp(2j * math.pi * DEFAULT_ALPHA_ANGLE)
        y0 = 0.5 + 0j
        x0 = -(1.0 + y0) / (1.0 + alpha)
        rc, out = run(
            tmp_path, "i.csv",
            ["orbit", f"--x0={x0.real}{x0.imag:+}j", "--y0", "0.5+0j", "--n", "4"],
        )
        assert rc == 0
        rows = [l.split(",") for l in out.read_text().splitlines()[2:]]
        finite_flags = [row[3] for row in rows]
        assert "0" in finite_flags


class TestClassifyCommand:
    def test_circle_domain_json(self, tmp_path):
        rc, out = run(
            tmp_path, "j.json",
            ["classify", "--map", "g", "--x0", "0.001+0j", "--y0", "0.001+0j",
             "--n", "50000"],
        )
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["rank"] == 1
        assert doc["confidence"] >= 0.9
        assert doc["config"]["map"] == "g"


class TestLinearizeCommand:
    def test_coefficient_export(self, tmp_path):
        rc, out = run(tmp_path, "k.json", ["linearize", "--order", "8"])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["N"] == 8
        alpha = complex(*doc["alpha"])
        beta = complex(*doc["beta"])
        b1 = beta * (1.0 + alpha) / (1.0 - beta)
        assert abs(complex(*doc["b"][1]) - b1) < 1e-12
        assert max(doc["residuals"]) <= 1e-10

    def test_near_resonant_is_numeric_error(self, tmp_path):
        rc, _ = run(
            tmp_path, "l.json",
            ["linearize", "--order", "8", "--freq", str(1.0 / 7.0 + 1e-11)],
        )
        assert rc == 3


class TestDegreeCommand:
    def test_growth_json(self, tmp_path):
        rc, out = run(tmp_path, "m.json", ["degree", "--max-n", "6"])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["degrees"] == [2, 2, 3, 3, 4, 4]
        assert doc["growth_class"] == "Linear"

    def test_csv_row_per_step(self, tmp_path):
        rc, out = run(tmp_path, "n.csv", ["degree", "--max-n", "6", "--format", "csv"])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "n,degree"
        assert len(lines) == 2 + 6

    def test_degenerate_specialization_is_numeric_error(self, tmp_path):
        rc, _ = run(tmp_path, "o.json",
                    ["degree", "--max-n", "4", "--specialize", "3,0"])
        assert rc == 3


class TestParser:
    def test_unknown_flag_exits_two(self):
        proc = subprocess.run(
            [sys.executable, "-m", "jonq.cli", "lyapunov", "--nope"],
            capture_output=True,
        )
        assert proc.returncode == 2

    def test_version_runs(self):
        proc = subprocess.run(
            [sys.executable, "-m", "jonq.cli", "--version"], capture_output=True
        )
        assert proc.returncode == 0
