import json
import subprocess
import sys

import pytest

from akh import families as F
from akh.cli import run
from akh.diagram import dump_diagram

import corpus as C


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, word, n in [("sigma1", [1], 2), ("trefoil", [1, 1, 1], 2)]:
        p = tmp_path / f"{name}.json"
        p.write_text(dump_diagram(F.braid_closure(word, n)))
        out[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text('{"crossings": [[1, 2, 3, 1]], "star": {"edge": 1, "side": "L"},'
                   ' "infinity": {"edge": 1, "side": "R"}}')
    out["bad"] = str(bad)
    return out


def _run(capsys, *argv):
    code = run(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_certify_sigma1(capsys, files):
    code, out, _ = _run(capsys, "certify", "wrap", files["sigma1"], "--json", "--verify-homology")
    assert code == 0
    rec = json.loads(out)
    assert rec["conclusive"] and rec["lower"] == rec["upper"] == 2 and rec["homology_verified"]


def test_homology_row(capsys, files):
    code, out, _ = _run(capsys, "homology", files["sigma1"], "--k", "2")
    assert code == 0
    assert out == "  i    q    k  group\n  0    2    2  Z\n"


def test_validate_malformed_reports_location(capsys, files):
    code, _, err = _run(capsys, "validate", files["bad"])
    assert code == 64
    assert "crossings[0]" in err and "edge multiplicity" in err


def test_usage_errors(capsys, files):
    assert _run(capsys, "frobnicate")[0] == 64
    assert _run(capsys, "resolve", files["sigma1"])[0] == 64
    assert _run(capsys, "resolve", files["sigma1"], "--u", "01")[0] == 64
    assert _run(capsys, "validate", "/nonexistent/file.json")[0] == 64


def test_computation_failure_and_inconclusive(capsys, tmp_path):
    base = F.braid_closure([1, 1, 1], 2)
    d, _ = F.cable(base, 2, F.layout_of(base).vertical())
    p = tmp_path / "cable.json"
    p.write_text(dump_diagram(d))
    assert _run(capsys, "homology", str(p), "--max-crossings", "8")[0] == 1
    assert _run(capsys, "certify", "wrap", str(p), "--max-crossings", "8")[0] == 2


def test_resolve_and_detect(capsys, files):
    code, out, _ = _run(capsys, "resolve", files["trefoil"], "--u", "000", "--w", "2", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["report"]["pwu"] and rec["wrap"] == 2
    code, out, _ = _run(capsys, "detect", "pwu", files["trefoil"], "--json")
    assert code == 0 and [0, 0, 0] in json.loads(out)["resolutions"]
    code, out, _ = _run(capsys, "detect", "gap", files["sigma1"], "--u", "0", "--json")
    rec = json.loads(out)
    assert rec["size"] == 1 and rec["generators"] == [["v+", "v+"]] and rec["matches_template"]


def test_transform_via_resolution_file(capsys, tmp_path):
    d = tmp_path / "nested.json"
    d.write_text(dump_diagram(C.hand("nested_red")))
    r = tmp_path / "res.json"
    r.write_text(json.dumps({"u": [0, 0, 1, 1]}))
    code, out, _ = _run(capsys, "transform", "uniformize", str(d), "--resolution", str(r),
                        "--w", "0", "--json")
    assert code == 0
    rec = json.loads(out)
    assert rec["steps"] and rec["steps"][-1] == rec["u"]
    assert _run(capsys, "transform", "uniformize", str(d), "--u", "0011", "--w", "2")[0] == 1


def test_gen_writes_diagram_and_witness(capsys, tmp_path):
    out = tmp_path / "belt.json"
    code, _, _ = _run(capsys, "gen", "belts", "--block", "belt:0:2", "--block", "1",
                      "--strands", "2", "--out", str(out))
    assert code == 0
    side = json.loads((tmp_path / "belt.json.witness.json").read_text())
    assert len(side["witnesses"]) == 2 and side["w"] == 2
    code, text, _ = _run(capsys, "verify-conjecture", str(out), "--threads", "2")
    assert code == 0 and "verified" in text
    code, _, _ = _run(capsys, "gen", "chains", "--word", "", "--strands", "2",
                      "--insert", "0:1:2:-1")
    assert code == 0
    assert _run(capsys, "gen", "braid", "--word", "3", "--strands", "2")[0] == 64


def test_complex_summary_and_dumps(capsys, files):
    code, out, _ = _run(capsys, "complex", files["sigma1"], "--k", "0", "--json")
    rec = json.loads(out)
    assert rec["d_squared_zero"]
    blocks = {(b["i"], b["q"], b["k"]): b["generators"] for b in rec["blocks"]}
    assert blocks == {(0, 0, 0): 2, (1, 0, 0): 1, (1, 2, 0): 1}
    assert _run(capsys, "complex", files["sigma1"], "--dot")[1].startswith("digraph")


def test_output_is_deterministic(capsys, files):
    for argv in (["homology", files["trefoil"], "--json"],
                 ["certify", "wrap", files["trefoil"], "--json"],
                 ["complex", files["trefoil"], "--triplets", "--k", "0"],
                 ["verify-conjecture", files["sigma1"], files["trefoil"], "--threads", "4"]):
        first = _run(capsys, *argv)
        assert _run(capsys, *argv) == first


def test_env_override(capsys, files, monkeypatch):
    monkeypatch.setenv("AKH_JSON", "1")
    code, out, _ = _run(capsys, "wrap", files["sigma1"])
    assert code == 0 and json.loads(out) == {"wrap": 2}
    monkeypatch.setenv("AKH_MAX_CROSSINGS", "2")
    assert _run(capsys, "homology", files["trefoil"])[0] == 1
    monkeypatch.setenv("AKH_THREADS", "many")
    assert _run(capsys, "wrap", files["sigma1"])[0] == 64


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "akh.cli", "wrap", files["sigma1"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "2\n"
