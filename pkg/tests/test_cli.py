import json

import numpy as np
import pytest

from monosynth.addition import format_matrix, parse_matrices
from monosynth.cli import main
from monosynth.netlist import read_netlist


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_synth_writes_netlist_and_report(tmp_path, capsys):
    out = tmp_path / "net.json"
    code, stdout, _ = run(capsys, "synth", "--construction", "majority",
                          "--k", "2", "--N", "4", "--d", "2", "--out", str(out))
    assert code == 0
    report = json.loads(stdout)
    assert report["measured_size"] <= report["bound"]
    assert report["measured_depth"] <= 2
    circuit = read_netlist(out)
    assert (circuit.k, circuit.N) == (2, 4)


def test_synth_to_stdout(capsys):
    code, stdout, stderr = run(capsys, "synth", "--construction", "connectivity",
                               "--k", "2", "--N", "4", "--block-size", "2")
    assert code == 0
    obj = json.loads(stdout)
    assert obj["monotone"] is True
    assert json.loads(stderr)["measured_depth"] >= 2


def test_synth_missing_flag_errors(capsys):
    with pytest.raises(SystemExit):
        main(["synth", "--construction", "majority", "--k", "2", "--N", "4"])


def test_eval_roundtrip(tmp_path, capsys):
    net = tmp_path / "net.json"
    run(capsys, "synth", "--construction", "majority", "--k", "2", "--N", "3",
        "--d", "1", "--out", str(net))
    mat = tmp_path / "x.txt"
    mat.write_text("011\n101\n")  # 3 + 5 = 8 >= 8
    code, stdout, _ = run(capsys, "eval", "--netlist", str(net), "--input", str(mat))
    assert code == 0 and stdout.strip() == "1"
    mat.write_text("011\n100\n")  # 3 + 4 = 7
    code, stdout, _ = run(capsys, "eval", "--netlist", str(net), "--input", str(mat))
    assert code == 0 and stdout.strip() == "0"


def test_verify_all_constructions(capsys):
    for args in (
        ["--construction", "majority", "--k", "2", "--N", "4", "--d", "2"],
        ["--construction", "ac0", "--k", "2", "--N", "3"],
        ["--construction", "connectivity", "--k", "2", "--N", "4", "--block-size", "2"],
    ):
        code, stdout, _ = run(capsys, "verify", *args)
        assert code == 0
        assert "0 mismatches" in stdout


def test_verify_ac0_expected_line(capsys):
    code, stdout, _ = run(capsys, "verify", "--construction", "ac0", "--k", "2", "--N", "3")
    assert code == 0 and stdout.strip() == "0 mismatches / 64 inputs"


def test_verify_enum_limit_refusal(capsys):
    code, stdout, stderr = run(capsys, "verify", "--construction", "majority",
                               "--k", "2", "--N", "4", "--d", "2", "--enum-limit", "4")
    assert code == 1
    assert "exceeds the enumeration limit 4" in stderr
    assert "at least 8" in stderr


def test_sample_dump_and_audit(tmp_path, capsys):
    out = tmp_path / "draws.txt"
    code, _, _ = run(capsys, "sample", "--family", "NO", "--level", "2", "--n", "2",
                     "--N1", "3", "--samples", "5", "--seed", "7", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert "seed=7" in text
    assert text.count("# SUM=127 expected=2^7-1=127 ok") == 5
    mats = parse_matrices(text)
    assert len(mats) == 5 and mats[0].shape == (3, 7)


def test_sample_byte_identical_reruns(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        run(capsys, "sample", "--family", "YESSTAR", "--level", "2", "--n", "3",
            "--N1", "4", "--samples", "8", "--seed", "123", "--out", str(path))
    assert a.read_bytes() == b.read_bytes()


def test_advantage_json(tmp_path, capsys):
    net = tmp_path / "net.json"
    run(capsys, "synth", "--construction", "majority", "--k", "2", "--N", "3",
        "--d", "1", "--out", str(net))
    code, stdout, _ = run(capsys, "advantage", "--netlist", str(net),
                          "--yes", "YES", "--no", "NO", "--level", "1",
                          "--n", "2", "--N1", "3", "--samples", "500", "--seed", "9")
    assert code == 0
    obj = json.loads(stdout)
    assert set(obj) == {"value", "mode", "samples", "stderr", "seed"}
    assert obj["value"] == 2.0 and obj["seed"] == 9


def test_report_csv(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "report", "--k-values", "2", "--N-values", "2,4",
                     "--d-values", "1,2", "--out", str(out))
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "k,N,d,measured_size,bound,measured_depth"
    assert len(lines) == 5
    for line in lines[1:]:
        k, N, d, measured, bound, dep = (int(p) for p in line.split(","))
        assert measured <= bound


def test_netlist_write_read_write_byte_stable(tmp_path, capsys):
    first = tmp_path / "one.json"
    run(capsys, "synth", "--construction", "ac0", "--k", "3", "--N", "3", "--out", str(first))
    circuit = read_netlist(first)
    from monosynth.netlist import to_json
    assert to_json(circuit).encode() == first.read_bytes()
