import json

import pytest

from isinggates.cli import build_parser, emit_report, run


def test_gates_table_md(capsys):
    assert run(["gates", "table"]) == 0
    out = capsys.readouterr().out
    row = next(l for l in out.splitlines() if l.startswith("| C5 "))
    assert "1.253" in row
    assert out.splitlines()[0].startswith("| label |")


def test_gates_table_csv_and_json(capsys):
    assert run(["gates", "table", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "label,duration_invJ,duration_s,relative_pct"
    assert lines[2].startswith("C2,2.5,2.5,71.4")
    assert run(["gates", "table", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["label"] for r in rows][:5] == ["C1", "C2", "C3", "C4", "C5"]


def test_table_seconds_with_reference_coupling(capsys):
    assert run(["gates", "table", "--format", "json", "--J", "88"]) == 0
    rows = {r["label"]: r for r in json.loads(capsys.readouterr().out)}
    assert rows["C1"]["duration_s"] == pytest.approx(3.5 / 88)


def test_verify_pass(capsys):
    assert run(["gates", "verify", "C5", "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)[0]
    assert rep["fidelity"] >= 1 - 1e-6
    assert "unitarity_error" in rep and rep["passed"] is True


def test_verify_fail_exit_code(capsys):
    assert run(["gates", "verify", "BB_U13", "--m", "1", "--tol", "1e-9"]) == 1
    assert "False" in capsys.readouterr().out


def test_verify_unknown_label(capsys):
    assert run(["gates", "verify", "C9"]) == 2
    assert "unknown realization" in capsys.readouterr().err


def test_geodesic_json(capsys, tmp_path):
    csv_path = tmp_path / "traj.csv"
    assert run(["geodesic", "--phi", "0.7853981634", "--trajectory-csv", str(csv_path)]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["tauJ"] == pytest.approx(0.627, abs=2e-3)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "tJ,x,y,z" and len(lines) == 202


def test_geodesic_usage_errors(capsys):
    assert run(["geodesic"]) == 2
    assert run(["geodesic", "--phi", "1", "--kappa", "1"]) == 2


def test_geodesic_infeasible(capsys):
    assert run(["geodesic", "--kappa", "0.05", "--u-max", "1"]) == 1


def test_sequence_emit(capsys, tmp_path):
    out = tmp_path / "c5.json"
    assert run(["sequence", "emit", "C5", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["name"] == "C5"
    assert out.read_text().endswith("\n")
    assert run(["sequence", "emit", "bb_sqrt13", "--m", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["name"] == "BB_SQRT13(m=3)"


def test_sequence_emit_factorization_is_usage_error(capsys):
    assert run(["sequence", "emit", "C2"]) == 2
    assert run(["sequence", "emit", "C5", "--format", "csv"]) == 2


def test_spectrum_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["spectrum", "--state", "A", "--params", "acetamide", "--out", str(out), "--points", "512"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "freq_Hz,real,imag" and len(lines) == 513


def test_spectrum_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"params": "ideal", "points": 64, "line_broadening": 1.0}))
    out = tmp_path / "s.csv"
    assert run(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 65


def test_spectrum_bad_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"points": 64, "bogus": 1}))
    assert run(["spectrum", "--config", str(cfg)]) == 2


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["gates", "table", "--bogus"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_deterministic_output(capsys):
    run(["gates", "table", "--format", "json"])
    a = capsys.readouterr().out
    run(["gates", "table", "--format", "json"])
    assert capsys.readouterr().out == a


def test_emit_report_empty():
    assert emit_report([], "md", ["label", "fidelity"]) == "| label | fidelity |\n|---|---|\n"
    assert emit_report([], "csv", ["label"]) == "label\n"
    assert emit_report([], "json", ["label"]) == "[]\n"


def test_emit_report_field_order():
    text = emit_report([{"b": 1, "a": 2}], "json", ["a", "b"])
    assert list(json.loads(text)[0]) == ["a", "b"]


def test_parser_has_subcommands():
    p = build_parser()
    assert p.prog == "isinggates"
