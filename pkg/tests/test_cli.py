from __future__ import annotations

import json

import pytest

from gossipclock.cli import EXIT_OK, EXIT_USAGE, main


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_optimize_complete(capsys):
    assert main(["optimize", "--gen", "complete:n=4"]) == EXIT_OK
    assert _json(capsys)["lambda2"] == pytest.approx(2 / 3, abs=1e-12)


def test_optimize_symstar_reports_m(capsys):
    assert main(["optimize", "--gen", "symstar:n=5,k=2", "--clock", "uniform"]) == EXIT_OK
    out = _json(capsys)
    assert out["diagnostics"]["m"] == 0
    assert out["mode"] == "uniform-clock"


def test_custom_topology_uses_oracle(tmp_path, capsys):
    path = tmp_path / "custom.json"
    path.write_text(json.dumps({"n_vertices": 4, "edges": [[0, 1], [1, 2], [2, 0], [2, 3]]}))
    assert main(["optimize", "--topology", str(path), "--budget", "2000"]) == EXIT_OK
    assert _json(capsys)["mode"] == "numeric"


def test_csv_output(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["optimize", "--gen", "path:n=4", "--format", "csv", "--out", str(out)]) == EXIT_OK
    data = out.read_bytes()
    assert data.startswith(b"kind,i,j,value\n")
    assert b"\r" not in data


@pytest.mark.parametrize(
    "argv",
    [
        ["optimize"],
        ["optimize", "--gen", "path:n=3", "--topology", "x.json"],
        ["optimize", "--gen", "path:n=3", "--unknown"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


def test_bad_descriptor_exit_code():
    assert main(["optimize", "--gen", "nosuch:n=3"]) == EXIT_USAGE


def test_quantum_check_pass(capsys):
    assert main(["quantum-check", "--gen", "path:n=3", "--d", "2", "--clock", "nonuniform"]) == EXIT_OK
    out = _json(capsys)
    assert out["lambda2_quantum"] == pytest.approx(0.75, abs=1e-9)
    assert out["lambda2_classical"] == pytest.approx(0.75, abs=1e-9)


def test_quantum_check_size_guard():
    assert main(["quantum-check", "--gen", "star:n=4", "--d", "4"]) == EXIT_USAGE


def test_simulate_deterministic(tmp_path):
    outputs = []
    for tag in ("a", "b"):
        stats, trace = tmp_path / f"{tag}.json", tmp_path / f"{tag}.csv"
        argv = ["simulate", "--gen", "cycle:n=4", "--optimal", "--trials", "200", "--ticks", "2000", "--seed", "7"]
        assert main(argv + ["--out", str(stats), "--trace", str(trace)]) == EXIT_OK
        outputs.append((stats.read_bytes(), trace.read_bytes()))
    assert outputs[0] == outputs[1]
    stats = json.loads(outputs[0][0])
    assert stats["spectral_consistent"] is True
    assert 0.9 * 0.75**2 <= stats["decay_rate"] < 1


def test_simulate_averaging_time(capsys):
    argv = ["simulate", "--gen", "complete:n=2", "--epsilon", "0.5", "--trials", "100", "--ticks", "100"]
    assert main(argv) == EXIT_OK
    assert _json(capsys)["T_ave"] == 1


def test_verify_tables_exit_zero(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify-tables", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["ok"] is True


def test_export_round_trip(tmp_path, capsys):
    topo = tmp_path / "t.json"
    assert main(["export", "--gen", "ccs:n=3,k=2", "--out", str(topo)]) == EXIT_OK
    assert main(["optimize", "--topology", str(topo)]) == EXIT_OK
    assert _json(capsys)["topology"] == {"generator": "ccs", "params": {"n": 3, "k": 2}}
