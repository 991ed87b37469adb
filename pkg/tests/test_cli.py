from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from sp4endo.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def _csv_rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(lines))


def test_verify_structure(capsys):
    code, out = run(["verify-structure", "--skip-jacobi"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out.out)
    assert doc["result"]["all_passed"]
    assert doc["config"]["subcommand"] == "verify-structure"


def test_packet_demo(capsys):
    code, out = run(["packet", "--demo"], capsys)
    assert code == EXIT_OK
    res = json.loads(out.out)["result"]
    assert res["round_trip_exact"]
    assert res["transfers"]["10"] == "-47/12"


def test_packet_input_file(tmp_path, capsys):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"group_rank": 1, "pairing": [[0], [1]], "traces": ["1/2", "1/3"]}))
    code, out = run(["packet", "--input", str(p)], capsys)
    assert code == EXIT_OK
    assert json.loads(out.out)["result"]["transfers"] == {"0": "5/6", "1": "1/6"}


def test_orbital_hyperbolic_row(capsys):
    code, out = run(["orbital", "--type", "hyp", "--a1", "2", "--a2", "3", "--profile", "5,4"], capsys)
    assert code == EXIT_OK
    assert out.out.startswith("# config: ")
    (row,) = _csv_rows(out.out)
    assert float(row["value"]) == pytest.approx(0.16702953282446012, rel=1e-9)
    assert float(row["err_est"]) >= 0


def test_orbital_elliptic_rows(capsys):
    code, out = run(["orbital", "--type", "ell", "--lambda", "1", "--lambda", "0.1"], capsys)
    assert code == EXIT_OK
    rows = _csv_rows(out.out)
    assert [float(r["lambda"]) for r in rows] == [1.0, 0.1]


def test_orbital_usage_errors(capsys):
    code, out = run(["orbital", "--type", "hyp", "--a1", "2"], capsys)
    assert code == EXIT_USAGE
    assert "usage" in out.err
    code, _ = run(["orbital", "--type", "hyp", "--a1", "1", "--a2", "3"], capsys)
    assert code == EXIT_USAGE


def test_bad_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["orbital", "--type", "parabolic"])
    assert e.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == EXIT_USAGE


def test_endoscopy_exact(capsys):
    m = json.dumps([[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, "1/2", 0], [0, 0, 0, "1/3"]])
    code, out = run(["endoscopy", "--matrix", m], capsys)
    assert code == EXIT_OK
    res = json.loads(out.out)["result"]
    assert res["type"] == "hyperbolic"
    assert res["centralizer_dim"] == 2
    assert res["endoscopic_kind"] == "torus"


def test_endoscopy_rejects_non_symplectic(capsys):
    m = json.dumps([[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, "1/3", 0], [0, 0, 0, "1/2"]])
    code, _ = run(["endoscopy", "--matrix", m], capsys)
    assert code == EXIT_USAGE


def test_decompose(capsys):
    m = json.dumps([[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 0.5, 0], [0, 0, 0, 1 / 3]])
    code, out = run(["decompose", "--matrix", m, "--kind", "iwasawa"], capsys)
    assert code == EXIT_OK
    res = json.loads(out.out)["result"]
    assert res["t"] == pytest.approx([2, 3])
    code, out = run(["decompose", "--random", "--seed", "4", "--kind", "kak"], capsys)
    assert code == EXIT_OK
    assert json.loads(out.out)["config"]["seed"] == 4


def test_characters_csv(capsys):
    code, out = run(["characters", "--kind", "stable", "--grid", "4"], capsys)
    assert code == EXIT_OK
    assert len(_csv_rows(out.out)) == 4


def test_expansion_csv(capsys):
    code, out = run(["expansion", "--points", "8"], capsys)
    assert code == EXIT_OK
    rows = _csv_rows(out.out)
    assert list(rows[0]) == ["lambda", "F", "A", "B", "G", "H"]
    assert len(rows) == 8


def test_artifacts_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["orbital", "--type", "ell", "--lambda", "0.3", "--out", str(path)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_selftest_subset(tmp_path, capsys):
    code, out = run(["selftest", "--only", "8", "--out", str(tmp_path)], capsys)
    assert code == EXIT_OK
    assert out.out.startswith("[PASS] criterion 8: packet Fourier")
    doc = json.loads((tmp_path / "acceptance.json").read_text())
    assert doc["config"]["seed"] == 42
    assert (tmp_path / "acceptance.txt").read_text() == out.out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "sp4endo", "packet", "--demo"], capture_output=True, text=True)
    assert r.returncode == EXIT_OK
    assert json.loads(r.stdout)["result"]["round_trip_exact"]


def test_failed_check_exit_1(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"group_rank": 1, "pairing": [[0], [1]], "traces": [1, 2],
                             "eps": [1, 1], "s0": [1]}))
    code, _ = run(["packet", "--input", str(p)], capsys)
    assert code == EXIT_FAIL
