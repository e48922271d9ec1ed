"""Command-line driver: exit codes, CSV structure, determinism, config
loading with flag overrides, and manifest-based resumption."""

import json
import math

import pytest

from lrkitaev.cli import main


def read_table(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# ")
    meta = json.loads(lines[0][2:])
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return meta, header, rows


# ---------------------------------------------------------------------------
# quench
# ---------------------------------------------------------------------------


def test_quench_output_schema(tmp_path):
    code = main(
        ["quench", "--alpha", "inf", "--beta", "inf", "--delta", "0.1",
         "--out", str(tmp_path), "--tol", "1e-8"]
    )
    assert code == 0
    meta, header, rows = read_table(tmp_path / "summary.csv")
    assert header == ["alpha", "beta", "delta", "n_exc", "n_exc_lz_quadrature", "n_exc_saddle_point"]
    assert meta["version"]
    assert meta["config"]["deltas"] == [0.1]
    alpha, beta, delta, n_exc, n_lz, n_saddle = rows[0]
    assert alpha == "inf" and beta == "inf"
    assert 0.0 < float(n_exc) < 1.0
    assert float(n_exc) == pytest.approx(float(n_lz), rel=0.1)

    meta, header, rows = read_table(tmp_path / "modes_alphainf_betainf_delta0.1.csv")
    assert header == ["k", "p_k_numeric", "p_k_lz_prediction"]
    assert all(0.0 <= float(r[1]) <= 1.0 for r in rows)
    assert (tmp_path / "manifest.json").exists()


def test_quench_deterministic_data_section(tmp_path):
    args = ["quench", "--alpha", "inf", "--beta", "1.5", "--delta", "0.2",
            "--tol", "1e-8"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    for name in ("summary.csv", "modes_alphainf_beta1.5_delta0.2.csv"):
        d1 = (out1 / name).read_text().splitlines()[1:]
        d2 = (out2 / name).read_text().splitlines()[1:]
        assert d1 == d2  # identical apart from the metadata timestamp line


def test_quench_manifest_resume_skips_completed(tmp_path):
    args = ["quench", "--alpha", "inf", "--beta", "inf", "--delta", "0.2",
            "--out", str(tmp_path), "--tol", "1e-8"]
    assert main(args) == 0
    mode_file = tmp_path / "modes_alphainf_betainf_delta0.2.csv"
    mode_file.write_text("sentinel")
    assert main(args) == 0
    # The completed cell was not recomputed.
    assert mode_file.read_text() == "sentinel"


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(
        "[model]\nalpha = 'inf'\nbeta = ['inf']\n"
        "[ramp]\ndelta = [0.5]\n"
        "[run]\ntol = 1e-8\nout = '%s'\n" % (tmp_path / "o1")
    )
    assert main(["quench", "--config", str(cfg)]) == 0
    meta, _, _ = read_table(tmp_path / "o1" / "summary.csv")
    assert meta["config"]["deltas"] == [0.5]
    # Flags win over the file.
    assert main(["quench", "--config", str(cfg), "--delta", "0.2",
                 "--out", str(tmp_path / "o2")]) == 0
    meta, _, _ = read_table(tmp_path / "o2" / "summary.csv")
    assert meta["config"]["deltas"] == [0.2]


@pytest.mark.parametrize(
    "args",
    [
        ["quench", "--alpha", "0.8", "--delta", "0.1"],  # exponent <= 1
        ["quench", "--alpha", "inf", "--beta", "inf"],  # no deltas
        ["quench", "--alpha", "inf", "--delta", "0.1", "--tol", "1e-3"],
        ["quench", "--alpha", "inf", "--delta", "-0.1"],
        ["finite-ramp", "--alpha", "inf", "--delta", "0.1", "--g-f", "0.5"],
        ["scaling", "--alpha", "inf", "--delta", "0.1", "--delta", "0.2"],
        ["phase-diagram", "--alpha", "inf"],  # no mu list
        ["quench", "--config", "/nonexistent/path.toml"],
    ],
)
def test_config_errors_exit_1(args, tmp_path):
    assert main(args + ["--out", str(tmp_path)]) == 1


# ---------------------------------------------------------------------------
# phase-diagram
# ---------------------------------------------------------------------------


def test_phase_diagram_windings(tmp_path):
    code = main(
        ["phase-diagram", "--alpha", "inf", "--beta", "inf",
         "--mu", "1.0", "--mu", "3.0", "--out", str(tmp_path),
         "--grid-points", "4000"]
    )
    assert code == 0
    _, header, rows = read_table(tmp_path / "winding.csv")
    assert header == ["alpha", "beta", "mu", "winding"]
    values = {float(r[2]): float(r[3]) for r in rows}
    assert values[1.0] == pytest.approx(1.0, abs=1e-6)
    assert values[3.0] == pytest.approx(0.0, abs=1e-6)


# ---------------------------------------------------------------------------
# finite-ramp
# ---------------------------------------------------------------------------


def test_finite_ramp_table(tmp_path):
    code = main(
        ["finite-ramp", "--alpha", "inf", "--beta", "inf", "--g-f", "1.5",
         "--delta", "0.02", "--delta", "0.05", "--delta", "0.1",
         "--out", str(tmp_path), "--tol", "1e-8"]
    )
    assert code == 0
    meta, header, rows = read_table(tmp_path / "finite_ramp.csv")
    assert header == ["delta", "n_exc", "n_exc_closed_form"]
    assert meta["g_f"] == 1.5
    # Quadratic scaling in delta, and rough agreement with the closed form.
    n = {float(r[0]): float(r[1]) for r in rows}
    assert n[0.1] / n[0.02] == pytest.approx(25.0, rel=0.15)
    for delta, n_num, n_cf in ((float(a), float(b), float(c)) for a, b, c in rows):
        assert n_num == pytest.approx(n_cf, rel=0.25)
