import json
import subprocess
import sys

import pytest

from tsallis_coherence.cli import main
from tsallis_coherence.formats import curves_from_csv, curves_to_csv


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def values(out):
    return [float(line.split()[-1]) for line in out.splitlines()[1:]]


def test_measure_first_example(capsys):
    code, out, _ = run(capsys, "measure", "--text", "tz 0.5 0", "--measure", "l1", "--measure", "tsallis:2",
                       "--measure", "rel", "--measure", "tsallis:0.5")
    assert code == 0
    assert values(out) == pytest.approx([0.5, 0.25, 0.13081, 0.0681], abs=5e-4)


def test_measure_diagonal_zero(capsys, tmp_path):
    f = tmp_path / "state.txt"
    f.write_text("matrix\n1 0\n0 0\n")
    code, out, _ = run(capsys, "measure", str(f))
    assert code == 0 and all(v == 0 for v in values(out))


def test_measure_qutrit(capsys):
    code, out, _ = run(capsys, "measure", "--text", "pure 0.83666002653407556 0.44721359549995793 "
                       "0.31622776601683794", "--measure", "l1")
    assert code == 0 and values(out)[0] == pytest.approx(1.5603, abs=5e-4)


def test_measure_ten_digits(capsys):
    _, out, _ = run(capsys, "measure", "--text", "tz 0.5 0.5", "--measure", "tsallis:0.5")
    assert out.splitlines()[1].split()[-1] == "0.07461516024"


@pytest.mark.parametrize(
    "argv",
    [["measure", "--text", "tz 0.9 0.9"], ["measure", "--text", "matrix;0.75 0.5;0.5 0.25"],
     ["measure", "--text", "pure 1 1"], ["measure", "--text", "tz 0.5 0", "--measure", "tsallis:7"],
     ["measure", "/nonexistent/state"]],
)
def test_measure_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_measure_error_names_invariant(capsys):
    _, _, err = run(capsys, "measure", "--text", "matrix;0.75 0.5;0.5 0.25")
    assert "NotPositive" in err


def test_reproduce_all(capsys):
    code, out, _ = run(capsys, "reproduce", "all")
    assert code == 0
    assert "21/21 measure values matched" in out and "7/7 violation verdicts confirmed" in out


def test_reproduce_single(capsys):
    code, out, _ = run(capsys, "reproduce", "qutrit-l1-vs-half")
    assert code == 0 and "Violation" in out


def test_reproduce_unknown(capsys):
    code, _, err = run(capsys, "reproduce", "bogus")
    assert code == 2 and "usage" in err


def test_reproduce_mismatch_exit(capsys, monkeypatch):
    from tsallis_coherence import registry

    orig = registry.registry_states

    def broken():
        states = orig()
        states["psi1"].expected[registry.L1] = 9.0
        return states

    monkeypatch.setattr(registry, "registry_states", broken)
    code, _, err = run(capsys, "reproduce")
    assert code == 3 and "MISMATCH" in err


def test_curves_csv(capsys):
    code, out, _ = run(capsys, "curves", "--alpha", "2", "--steps", "4")
    assert code == 0
    assert out == "t,c_max,c_min,alpha\n0,0,0,2\n0.25,0.25,0.0625,2\n0.5,0.5,0.25,2\n0.75,0.75,0.5625,2\n1,1,1,2\n"
    assert curves_to_csv(curves_from_csv(out)) == out


def test_curves_json_file(capsys, tmp_path):
    f = tmp_path / "c.json"
    code, _, _ = run(capsys, "curves", "--alpha", "1", "--steps", "10", "--format", "json", "--out", str(f))
    rows = json.loads(f.read_text())
    assert code == 0 and len(rows) == 11 and rows[-1]["t"] == 1.0


def test_curves_unwritable(capsys):
    code, _, _ = run(capsys, "curves", "--alpha", "0.5", "--steps", "4", "--out", "/nonexistent/dir/x.csv")
    assert code == 2


def test_curves_bad_alpha(capsys):
    assert run(capsys, "curves", "--alpha", "3", "--steps", "4")[0] == 2


def test_scan_pure(capsys, tmp_path):
    f = tmp_path / "r.json"
    code, out, _ = run(capsys, "scan", "--family", "pure", "--measure-b", "tsallis:2", "--n", "10000",
                       "--seed", "7", "--out", str(f))
    assert code == 0 and "violations=0" in out
    assert json.loads(f.read_text())["violationCount"] == 0


def test_scan_byte_identical(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code, _, _ = run(capsys, "scan", "--family", "mixed_disk", "--measure-b", "tsallis:2", "--n", "100000",
                         "--out", str(p))
        assert code == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    assert json.loads(a)["violationCount"] >= 1


def test_scan_csv(capsys, tmp_path):
    f = tmp_path / "r.csv"
    code, _, _ = run(capsys, "scan", "--family", "qudit", "--dim", "3", "--measure-b", "tsallis:0.5",
                     "--n", "20000", "--format", "csv", "--out", str(f))
    lines = f.read_text().splitlines()
    assert code == 0 and lines[0].startswith("index,") and len(lines) > 1


def test_scan_bad_flags(capsys):
    assert run(capsys, "scan", "--family", "pure", "--measure-b", "bogus")[0] == 2
    assert run(capsys, "scan", "--family", "nope", "--measure-b", "l2")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [["prop1", "--alpha", "0.5", "--alpha", "2"], ["prop2", "--t", "0.5", "--alpha", "1"],
     ["appendix", "--t", "0.5"], ["eq3", "--cases", "500"], ["c2a", "--cases", "300"],
     ["c3", "--cases", "300"]],
)
def test_monotonicity_pass(capsys, argv):
    code, out, _ = run(capsys, "monotonicity", *argv)
    assert code == 0 and "PASS" in out and "FAIL" not in out


def test_monotonicity_c2b_log_and_replay(capsys, tmp_path):
    log = tmp_path / "w.jsonl"
    code, out, _ = run(capsys, "monotonicity", "c2b", "--dim", "3", "--cases", "2000", "--seed", "3",
                       "--log", str(log))
    assert code == 0 and "WITNESSES" in out
    records = [json.loads(line) for line in log.read_text().splitlines()]
    assert records[0]["kind"] == "c2b-run"
    assert any(r["kind"] == "c2b" for r in records)
    code, out, _ = run(capsys, "monotonicity", "c2b", "--replay", str(log))
    assert code == 0 and "PASS" in out


def test_monotonicity_bad_kind(capsys):
    assert run(capsys, "monotonicity", "prop9")[0] == 2


def test_monotonicity_degenerate(capsys):
    assert run(capsys, "monotonicity", "prop2", "--t", "0.9999999999999", "--alpha", "2")[0] == 2


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "tsallis_coherence.cli", "curves", "--alpha", "0.5",
                          "--steps", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("t,c_max,c_min,alpha\n")
