"""End-to-end tests of the command-line surface, run in subprocesses so the
exit-code contract and stdio behavior are exercised for real."""

import json
import math
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "slitmap.cli"]


def run(*args, env_extra=None, **kw):
    import os
    env = os.environ.copy()
    env.pop("SLITMAP_TRUNC_TOL", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(CLI + list(args), capture_output=True, text=True,
                          env=env, **kw)


class TestPrime:
    def test_value(self):
        res = run("prime", "--r", "0.3", "--z", "0.8", "--y", "0.5")
        assert res.returncode == 0
        v = complex(res.stdout.strip())
        assert abs(v - 0.2920690787038353) < 1e-13

    @pytest.mark.parametrize("check,z,y,r", [
        ("reflect", "0.7", "0.4", "0.2"),
        ("period", "0.4", "0.7", "0.3"),
        ("period", "0.5j", "0.6", "0.4"),
    ])
    def test_identity_residuals(self, check, z, y, r):
        res = run("prime", "--r", r, "--z", z, "--y", y, "--check", check)
        assert res.returncode == 0
        assert float(res.stdout.strip()) < 1e-10

    def test_missing_argument_is_usage_error(self):
        res = run("prime", "--r", "0.3", "--z", "0.8")
        assert res.returncode == 2

    def test_bad_radius_is_usage_error(self):
        res = run("prime", "--r", "1.2", "--z", "0.8", "--y", "0.5")
        assert res.returncode == 2
        assert "error" in res.stderr


class TestMap:
    def test_boundary_csv(self, tmp_path):
        out = tmp_path / "bdry.csv"
        res = run("map", "--r", "0.2", "--y", "0.5", "--samples", "32",
                  "--out", str(out))
        assert res.returncode == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "theta,re,im,modulus"
        assert len(lines) == 1 + 64  # outer block then inner block
        outer = [float(l.split(",")[3]) for l in lines[1:33]]
        inner = [float(l.split(",")[3]) for l in lines[33:]]
        assert max(abs(m - 1.0) for m in outer) < 1e-9
        assert max(abs(m - 0.5) for m in inner) < 1e-9

    def test_geometry_json(self):
        res = run("map", "--r", "0.2", "--y", "0.5", "--geometry")
        assert res.returncode == 0
        doc = json.loads(res.stdout)
        assert doc["slit_radius"] == pytest.approx(0.5, abs=1e-8)
        # conjugation symmetry of a real marked point
        assert doc["preimage_sum"] == pytest.approx(2.0 * math.pi, abs=1e-7)
        assert doc["r"] == 0.2 and doc["y_im"] == 0.0
        assert doc["trunc_tol"] == 1e-12

    def test_coarse_truncation_is_numerical_failure(self):
        res = run("map", "--r", "0.2", "--y", "0.5", "--geometry",
                  "--trunc-tol", "1e-3")
        assert res.returncode == 4
        assert "numerical failure" in res.stderr

    def test_unwritable_output_is_io_error(self):
        res = run("map", "--r", "0.2", "--y", "0.5",
                  "--out", "/nonexistent-dir/x.csv")
        assert res.returncode == 3


class TestSqueeze:
    def test_point_value(self):
        res = run("squeeze", "--r", "0.1", "--zmod", "0.5")
        assert res.returncode == 0
        assert float(res.stdout.strip()) == 0.5

    def test_product_bound(self):
        res = run("squeeze", "--product", "0.5,0.3333333333333333,0.25")
        assert res.returncode == 0
        assert float(res.stdout.strip()) == pytest.approx(29.0 ** -0.5, abs=1e-15)

    def test_compare_conjecture(self):
        res = run("squeeze", "--r", "0.1", "--zmod", "0.5",
                  "--compare-conjecture")
        thm, conj, diff = (float(x) for x in res.stdout.split())
        assert thm == 0.5
        assert conj == pytest.approx(8.0 / 19.0, abs=1e-15)
        assert diff == pytest.approx(thm - conj, abs=1e-15)

    def test_disk_factor(self):
        res = run("squeeze", "--r", "0.1", "--zmod", "0.2", "--disk-factor")
        assert float(res.stdout.strip()) == pytest.approx(
            0.1 / math.sqrt(0.05), abs=1e-15)

    def test_sweep_csv_and_warning_note(self, tmp_path):
        out = tmp_path / "sweep.csv"
        res = run("squeeze", "--r", "0.16", "--sweep", "5", "--out", str(out))
        assert res.returncode == 0
        assert "below sqrt(r)" in res.stderr  # first sample at 0.3 < 0.4
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "zmod,theorem,conjecture,diff"
        assert len(lines) == 6
        for line in lines[1:]:
            zm, thm, conj, diff = (float(x) for x in line.split(","))
            assert 0.16 < zm < 1.0
            assert diff == pytest.approx(thm - conj, abs=1e-15)

    def test_zmod_outside_annulus_is_usage_error(self):
        res = run("squeeze", "--r", "0.5", "--zmod", "0.3")
        assert res.returncode == 2


class TestLoewner:
    def test_inner_run_and_round_trip(self, tmp_path):
        out = tmp_path / "traj.csv"
        res = run("loewner", "--mode", "inner", "--r", "0.2", "--T", "0.1",
                  "--beta", "const:3.141592653589793", "--y0", "0.5",
                  "--ds", "1e-3", "--out", str(out))
        assert res.returncode == 0
        y_T = float(res.stdout.strip().split("=")[1])
        assert y_T > 0.5
        assert y_T == pytest.approx(0.5212949193400096, abs=1e-9)

        raw = out.read_bytes()
        lines = raw.decode().strip().split("\n")
        assert lines[0] == "s,r_t,y_t,xi_1,xi_plus,xi_minus,lambda"
        assert len(lines) == 1 + 101

        # byte-identical round trip through parse and re-format
        def refmt(cell):
            v = float(cell)
            return "nan" if math.isnan(v) else f"{v:.17e}"

        rebuilt = lines[0] + "\n" + "\n".join(
            ",".join(refmt(c) for c in l.split(",")) for l in lines[1:]) + "\n"
        assert rebuilt.encode() == raw

    def test_outer_run_prints_points(self):
        # leading-dash complex literals need the --opt=value spelling
        res = run("loewner", "--mode", "outer", "--r", "0.2", "--T", "0.05",
                  "--beta", "const:0.0", "--points=-0.5,0.45j",
                  "--ds", "5e-3")
        assert res.returncode == 0
        head = res.stdout.strip().split("\n")[0]
        assert head.startswith("r_T=") and "points=2" in head

    def test_three_slit_balanced(self):
        res = run("loewner", "--mode", "three-slit", "--r", "0.2", "--T", "0.1",
                  "--beta", "const:3.141592653589793", "--y0", "0.5",
                  "--xi-plus", str(4.0 * math.pi / 3.0),
                  "--xi-minus", str(2.0 * math.pi / 3.0),
                  "--ds", "2e-3", "--balanced")
        assert res.returncode == 0
        parts = dict(p.split("=") for p in res.stdout.strip().split())
        assert float(parts["y_T"]) > 0.5
        assert float(parts["max_defect"]) < 1e-6

    def test_degenerate_time_single_row(self, tmp_path):
        out = tmp_path / "t0.csv"
        res = run("loewner", "--mode", "inner", "--r", "0.2", "--T", "0.0",
                  "--beta", "const:1.0", "--y0", "0.5", "--out", str(out))
        assert res.returncode == 0
        assert float(res.stdout.strip().split("=")[1]) == 0.5
        assert len(out.read_text().strip().split("\n")) == 2

    def test_piecewise_driving(self):
        res = run("loewner", "--mode", "inner", "--r", "0.2", "--T", "0.1",
                  "--beta", "pl:0:3.0,0.1:3.3", "--y0", "0.5", "--ds", "2e-3")
        assert res.returncode == 0

    def test_missing_marked_point_is_usage_error(self):
        res = run("loewner", "--mode", "inner", "--r", "0.2", "--T", "0.1",
                  "--beta", "const:0.0")
        assert res.returncode == 2

    def test_blow_up_is_numerical_failure(self):
        res = run("loewner", "--mode", "inner", "--r", "0.2", "--T", "0.5",
                  "--beta", "const:0.0", "--y0", "0.25", "--ds", "1e-2")
        assert res.returncode == 4


class TestEnvironment:
    def test_env_tolerance_is_honored(self):
        res = run("map", "--r", "0.2", "--y", "0.5", "--geometry",
                  env_extra={"SLITMAP_TRUNC_TOL": "1e-3"})
        assert res.returncode == 4  # coarse env tolerance breaks the geometry fit

    def test_flag_overrides_env(self):
        res = run("map", "--r", "0.2", "--y", "0.5", "--geometry",
                  "--trunc-tol", "1e-13",
                  env_extra={"SLITMAP_TRUNC_TOL": "1e-3"})
        assert res.returncode == 0
        assert json.loads(res.stdout)["trunc_tol"] == 1e-13

    def test_malformed_env_is_usage_error(self):
        res = run("prime", "--r", "0.3", "--z", "0.8", "--y", "0.5",
                  env_extra={"SLITMAP_TRUNC_TOL": "abc"})
        assert res.returncode == 2
