import csv
import subprocess
import sys

import numpy as np

from conftest import OMEGA_0, V
from frenetpark import builtin_scenario, sample_series, write_csv
from frenetpark.cli import main
from frenetpark.frenet import frenet_series
from frenetpark.signals import SampledSeries, derivatives


def run(argv, capsys):
    rc = main(argv)
    out, err = capsys.readouterr()
    return rc, out, err


def table(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    header, body = rows[0], rows[1:]
    cols = {}
    for i, name in enumerate(header):
        cols[name] = np.array([float(r[i]) if r[i] != "" else np.nan for r in body])
    return header, cols


# --- generate -------------------------------------------------------------------------------


def test_generate_row_count_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        rc, _, _ = run(["generate", "--scenario", "E1", "--dt", "1e-4", "--duration", "0.1", "-o", str(p)], capsys)
        assert rc == 0
    lines = a.read_text().splitlines()
    assert lines[0] == "t,v1,v2,v3"
    assert len(lines) - 1 == 1001
    assert a.read_bytes() == b.read_bytes()


def test_generate_with_derivatives_to_stdout(capsys):
    rc, out, _ = run(["generate", "--scenario", "SIX", "--duration", "0.001", "--with-derivatives"], capsys)
    assert rc == 0
    header = out.splitlines()[0].split(",")
    assert header[:7] == ["t", "v1", "v2", "v3", "v4", "v5", "v6"]
    assert header[-1] == "v6_d3"


def test_generate_unknown_scenario(capsys):
    rc, out, err = run(["generate", "--scenario", "E7"], capsys)
    assert rc != 0 and out == ""
    assert len(err.strip().splitlines()) == 1
    for name in ("E1", "E2", "E3", "E4", "E5", "E6", "SIX"):
        assert name in err


def test_generate_bad_output_path(tmp_path, capsys):
    target = tmp_path / "missing" / "x.csv"
    rc, _, err = run(["generate", "--scenario", "E1", "-o", str(target)], capsys)
    assert rc == 2 and str(target) in err


# --- analyze ------------------------------------------------------------------------------------


def test_analyze_e1_per_unit(tmp_path, capsys):
    p = tmp_path / "e1.csv"
    rc, _, _ = run(["analyze", "--scenario", "E1", "--v-base", "15e3", "--theta-p0", str(np.pi / 6), "-o", str(p)], capsys)
    assert rc == 0
    header, c = table(p)
    assert header == ["t", "defined", "vmag", "w_kappa", "w_tau", "vT", "vN", "vB", "vd", "vq", "vo"]
    assert np.all(c["defined"] == 1)
    np.testing.assert_allclose(c["w_kappa"], 1.0, atol=1e-12)
    np.testing.assert_allclose(c["w_tau"], 0.0, atol=1e-12)
    np.testing.assert_allclose(c["vT"], np.sqrt(1.5), rtol=1e-12)
    np.testing.assert_allclose(c["vd"], np.sqrt(1.5), rtol=1e-12)
    np.testing.assert_allclose(c["vq"], 0.0, atol=1e-12)


def test_analyze_si_units_without_base(tmp_path, capsys):
    p = tmp_path / "e1.csv"
    run(["analyze", "--scenario", "E1", "--duration", "0.01", "-o", str(p)], capsys)
    _, c = table(p)
    np.testing.assert_allclose(c["w_kappa"], OMEGA_0, rtol=1e-12)
    np.testing.assert_allclose(c["vmag"], np.sqrt(1.5) * V, rtol=1e-12)


def test_analyze_e2_dq_oscillates_tnb_constant(tmp_path, capsys):
    p = tmp_path / "e2.csv"
    run(["analyze", "--scenario", "E2", "--v-base", "15e3", "-o", str(p)], capsys)
    _, c = table(p)
    assert np.ptp(c["vd"]) > 2.0 and np.ptp(c["vq"]) > 2.0
    np.testing.assert_allclose(c["vT"], np.sqrt(1.5), rtol=1e-12)
    np.testing.assert_allclose(c["w_kappa"], 1.2, rtol=1e-12)


def test_analyze_e5_planar(tmp_path, capsys):
    p = tmp_path / "e5.csv"
    run(["analyze", "--scenario", "E5", "--v-base", "15e3", "-o", str(p)], capsys)
    _, c = table(p)
    assert np.all(np.abs(c["w_tau"]) < 1e-9)
    assert np.ptp(c["vT"]) > 0.1


def test_analyze_file_input_warns_and_uses_finite_differences(tmp_path, capsys, caplog):
    src = tmp_path / "in.csv"
    write_csv(sample_series(builtin_scenario("E1"), 0.0, 0.01, 1e-5), src)
    out = tmp_path / "out.csv"
    rc, _, _ = run(["analyze", "--input", str(src), "--v-base", "15e3", "-o", str(out)], capsys)
    assert rc == 0
    assert any("finite differences" in r.message for r in caplog.records)
    _, c = table(out)
    # two-pass central differences leave the first and last two samples undefined
    assert c["defined"][0] == 0 and np.isnan(c["w_kappa"][0])
    assert np.all(c["defined"][2:-2] == 1)
    np.testing.assert_allclose(c["w_kappa"][2:-2], 1.0, atol=1e-5)


def test_analyze_file_derivative_channels_are_used(tmp_path, capsys):
    src = tmp_path / "in.csv"
    write_csv(sample_series(builtin_scenario("E6"), 0.0, 0.005, 1e-4, with_analytic=True), src)
    out = tmp_path / "out.csv"
    run(["analyze", "--input", str(src), "--deriv-mode", "finite-difference", "-o", str(out)], capsys)
    _, c = table(out)
    ref = frenet_series(*derivatives(builtin_scenario("E6"), 1e-4 * np.arange(51), 2))
    assert np.all(c["defined"] == 1)
    np.testing.assert_allclose(c["w_tau"], ref.omega_tau, rtol=1e-12)


def test_analyze_rejects_non_three_phase(capsys):
    rc, _, err = run(["analyze", "--scenario", "SIX"], capsys)
    assert rc == 2 and "nd-analyze" in err


def test_analyze_bad_csv_names_line(tmp_path, capsys):
    src = tmp_path / "in.csv"
    src.write_text("t,v1,v2,v3\n0,1,2,3\n0.1,1,2\n")
    rc, _, err = run(["analyze", "--input", str(src)], capsys)
    assert rc == 2 and ":3:" in err
    assert len(err.strip().splitlines()) == 1


def test_analyze_zero_voltage_rows_flagged(tmp_path, capsys):
    src = tmp_path / "zero.csv"
    write_csv(SampledSeries(1e-3, 0.0, np.zeros((10, 3))), src)
    out = tmp_path / "out.csv"
    rc, _, _ = run(["analyze", "--input", str(src), "--deriv-mode", "finite-difference", "-o", str(out)], capsys)
    assert rc == 0
    _, c = table(out)
    assert np.all(c["defined"] == 0) and np.all(np.isnan(c["w_kappa"]))


# --- compare --------------------------------------------------------------------------------------------


def summary_of(out):
    lines = out.strip().splitlines()
    assert lines[0].split() == ["quantity", "value"]
    return {k: float(v) for k, v in (line.split() for line in lines[1:])}


def test_compare_e1_matched(tmp_path, capsys):
    p = tmp_path / "cmp.csv"
    rc, out, _ = run(["compare", "--scenario", "E1", "--theta-p0", str(np.pi / 6), "-o", str(p)], capsys)
    assert rc == 0
    s = summary_of(out)
    assert s["deviation_max"] < 1e-9
    assert s["psi_rotation_max"] < 1e-9 * OMEGA_0
    header, c = table(p)
    assert header == ["t", "defined", "deviation", "psi_w12", "psi_w23", "psi_w13"]
    assert np.all(c["deviation"] < 1e-9)


def test_compare_e2_bounded_oscillation(tmp_path, capsys):
    p = tmp_path / "cmp.csv"
    rc, out, _ = run(["compare", "--scenario", "E2", "-o", str(p), "--duration", "0.2"], capsys)
    s = summary_of(out)
    _, c = table(p)
    assert s["deviation_max"] <= 2.0
    assert np.all(c["deviation"] <= 2.0)
    assert np.ptp(c["deviation"]) > 1.0
    # Ψ rotates at ω_P - ω_a = -0.2 ω_o in the dq plane
    np.testing.assert_allclose(c["psi_w12"], -0.2 * OMEGA_0, rtol=1e-9)


# --- nd-analyze ---------------------------------------------------------------------------------------------


def test_nd_analyze_six_phase(tmp_path, capsys):
    p = tmp_path / "six.csv"
    rc, _, _ = run(["nd-analyze", "--scenario", "SIX", "--v-base", "15e3", "-o", str(p)], capsys)
    assert rc == 0
    header, c = table(p)
    assert header == ["t", "vmag", "w_chi_1", "w_chi_2", "w_chi_3", "w_chi_4", "w_chi_5", "rank"]
    np.testing.assert_allclose(c["w_chi_1"], 1.0, atol=1e-12)
    for i in range(2, 6):
        assert np.all(np.abs(c[f"w_chi_{i}"]) < 1e-9)
    assert np.all(c["rank"] == 2)


def test_nd_analyze_three_phase_matches_frenet(tmp_path, capsys):
    for name in ("E1", "E6"):
        p = tmp_path / f"{name}.csv"
        run(["nd-analyze", "--scenario", name, "-o", str(p)], capsys)
        _, c = table(p)
        t = 1e-4 * np.arange(1001)
        ref = frenet_series(*derivatives(builtin_scenario(name), t, 2))
        np.testing.assert_allclose(c["w_chi_1"], ref.omega_kappa, rtol=1e-8)
        np.testing.assert_allclose(c["w_chi_2"], ref.omega_tau, rtol=0, atol=1e-8 * np.max(np.abs(ref.omega_kappa)))


def test_nd_analyze_zero_input_all_flagged(tmp_path, capsys):
    src = tmp_path / "zero.csv"
    write_csv(SampledSeries(1e-3, 0.0, np.zeros((12, 4))), src)
    out = tmp_path / "out.csv"
    rc, _, _ = run(["nd-analyze", "--input", str(src), "-o", str(out)], capsys)
    assert rc == 0
    _, c = table(out)
    assert np.all(c["rank"] == 0) and np.all(np.isnan(c["w_chi_1"]))


def test_nd_analyze_high_order_gate(tmp_path, capsys, caplog):
    src = tmp_path / "six.csv"
    write_csv(sample_series(builtin_scenario("SIX"), 0.0, 0.002, 1e-5), src)
    out = tmp_path / "out.csv"
    rc, _, _ = run(["nd-analyze", "--input", str(src), "--deriv-mode", "finite-difference", "-o", str(out)], capsys)
    assert rc == 0 and any("allow-high-order" in r.message for r in caplog.records)
    rc, _, _ = run(["nd-analyze", "--input", str(src), "--deriv-mode", "finite-difference", "--allow-high-order", "-o", str(out)], capsys)
    assert rc == 0


def test_nd_analyze_rejects_two_phase(tmp_path, capsys):
    src = tmp_path / "two.csv"
    src.write_text("t,v1,v2\n0,1,0\n0.1,0,1\n0.2,-1,0\n")
    rc, _, err = run(["nd-analyze", "--input", str(src)], capsys)
    assert rc == 2 and "at least 3" in err


# --- process-level behaviour --------------------------------------------------------------------------------


def test_argument_errors_exit_nonzero_single_line():
    res = subprocess.run([sys.executable, "-m", "frenetpark", "analyze", "--dt", "-1", "--scenario", "E1"], capture_output=True, text=True)
    assert res.returncode == 2
    assert len(res.stderr.strip().splitlines()) == 1 and "positive" in res.stderr


def test_console_entry_point_runs():
    res = subprocess.run([sys.executable, "-m", "frenetpark", "generate", "--scenario", "E1", "--duration", "0.001"], capture_output=True, text=True)
    assert res.returncode == 0
    assert len(res.stdout.splitlines()) == 12
