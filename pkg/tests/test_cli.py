"""CLI contract: exit codes, determinism, CSV and JSON shapes."""

import json
import math

import pytest

from fermiqca.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_verify_exit_codes(capsys):
    code, out = run(capsys, "verify", "--suite", "car", "--modes", "1")
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_unknown_suite_is_usage_error(capsys):
    code, _ = run(capsys, "verify", "--suite", "bogus")
    assert code == 2


def test_verify_theorem1_at_six_modes(capsys):
    code, out = run(capsys, "verify", "--suite", "theorem1", "--modes", "6",
                    "--seed", "42")
    assert code == 0
    report = json.loads(out)
    assert report["pass"]
    residuals = [c["residual"] for c in report["checks"] if "prod" in c["name"]]
    assert residuals and max(residuals) < 1e-10


def test_verify_reports_are_byte_identical(capsys, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        code = main(["verify", "--suite", "endtoend", "--seed", "7", "--out", str(path)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_dispersion_csv(capsys):
    code, out = run(
        capsys, "dirac", "dispersion1d", "--sites", "9", "--mass-coupling", "0.5"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == "k,p,M,omega"
    assert len(lines) == 2 + 9
    for row in lines[2:]:
        k, p, m, w = row.split(",")
        assert abs(math.cos(float(w)) - math.cos(float(m)) * math.cos(float(p))) < 1e-12
        assert float(p) == pytest.approx(2 * math.pi * int(k) / 9)


def test_dispersion_massless_omega_equals_abs_p(capsys):
    code, out = run(capsys, "dirac", "dispersion1d", "--sites", "7", "--mass-coupling", "0")
    rows = out.strip().splitlines()[2:]
    for row in rows:
        _, p, _, w = row.split(",")
        assert abs(float(w) - abs(float(p))) < 1e-12


def test_converge1d_ratio_window(capsys):
    code, out = run(
        capsys, "dirac", "converge1d", "--m", "1", "--p", "1", "--t", "1",
        "--eps", "0.1,0.05,0.025",
    )
    assert code == 0
    rows = out.strip().splitlines()[2:]
    errs = [float(r.split(",")[2]) for r in rows]
    steps = [int(r.split(",")[1]) for r in rows]
    assert steps == [10, 20, 40]
    for a, b in zip(errs, errs[1:]):
        assert 0.4 <= b / a <= 0.6


def test_invalid_params_are_usage_errors(capsys):
    code, _ = run(capsys, "dirac", "dispersion1d", "--sites", "8")
    assert code == 2  # even N
    code, _ = run(capsys, "dirac", "converge1d", "--eps", "0.3")
    assert code == 2  # non-integral t/eps


def test_csv_floats_round_trip(capsys):
    _, out = run(capsys, "dirac", "converge1d", "--eps", "0.1,0.05")
    for row in out.strip().splitlines()[2:]:
        eps, _, err = row.split(",")
        assert repr(float(eps)) == eps
        assert repr(float(err)) == err


def test_compile_emits_circuit_json(capsys):
    code, out = run(capsys, "compile", "dirac1d", "--sites", "3")
    assert code == 0
    data = json.loads(out)
    assert data["metadata"]["gate_count"] == 9
    assert data["metadata"]["verified"] is True
    assert data["metadata"]["step_fidelity"] > 1 - 1e-10
    assert len(data["layers"]) == data["metadata"]["layer_count"]


def test_compile_large_warns_and_skips_verification(capsys):
    code = main(["compile", "dirac1d", "--sites", "9"])
    captured = capsys.readouterr()
    assert code == 0
    assert "verification skipped" in captured.err
    data = json.loads(captured.out)
    assert data["metadata"]["verified"] is False
    assert "step_fidelity" not in data["metadata"]


def test_demo_noncausal_csv(capsys):
    code, out = run(capsys, "demo-noncausal", "--sites", "9", "--time", "0.001")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[1] == "t,site,amplitude"
    rows = [l.split(",") for l in lines[2:]]
    assert len(rows) == 9
    amp4 = float(next(r for r in rows if r[1] == "4")[2])
    assert amp4 > 0


def test_dispersion3d_csv(capsys):
    code, out = run(capsys, "dirac", "dispersion3d", "--sites", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[1] == "k1,k2,k3,omega_plus,omega_minus"
    assert len(lines) == 2 + 27


def test_compile_zero_steps_is_empty_circuit(capsys):
    code, out = run(capsys, "compile", "dirac1d", "--sites", "3",
                    "--mass-coupling", "0", "--steps", "0")
    assert code == 0
    data = json.loads(out)
    assert data["layers"] == [] and data["metadata"]["gate_count"] == 0


def test_csv_outputs_are_byte_identical(tmp_path):
    paths = [tmp_path / f"{i}.csv" for i in range(2)]
    for p in paths:
        assert main(["dirac", "converge1d", "--eps", "0.1,0.05", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    paths = [tmp_path / f"d{i}.csv" for i in range(2)]
    for p in paths:
        assert main(["demo-noncausal", "--sites", "7", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
