import json
import subprocess
import sys

import pytest

from colortwist.cli import main
from colortwist.webalg import OperatorQ

FIG1 = {"n": 3, "N": 3, "gamma": [1, 2, 3], "prefix": [], "period": [1, 1, 2, 2]}
DELETE_S2 = {"head": [], "tail": {"start": 2, "stride": 4, "pattern": [[0, 2]]}}
S_WORD = {"n": 3, "N": 2, "gamma": [1, 1, 1], "prefix": [], "period": [1, 1, 2, 2],
          "certificate": {"head": [], "tail": {"start": 0, "stride": 4, "pattern": [[1, 2], [3, 4]]}}}
FT3 = {"n": 3, "N": 2, "gamma": [1, 1, 1], "prefix": [], "period": [1, 2, 1, 2, 1, 2]}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, obj in [("fig1", FIG1), ("c1", DELETE_S2), ("s", S_WORD), ("ft", FT3),
                      ("bi", {"n": 2, "N": 2, "gamma": [1, 1], "core": [],
                              "left": {"period": [1]}, "right": {"period": [1]}})]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        out[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3,\n "period": [1, }')
    out["bad"] = str(bad)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_cs(capsys):
    code, out = run(capsys, "cs", "--gamma", "1,2,3")
    assert code == 0 and json.loads(out.out) == {"colorSize": 4, "gamma": [1, 2, 3]}
    code, out = run(capsys, "cs", "--gamma", "1,2,3", "--format", "table")
    assert "colorSize\t4" in out.out


def test_purity(capsys, files):
    code, out = run(capsys, "purity", "--word", files["fig1"], "--steps", "3")
    assert code == 0 and json.loads(out.out)["entries"] == [2, 4, 6]


def test_certify_fig1_rejected(capsys, files):
    code, out = run(capsys, "certify", "--word", files["fig1"], "--cert", files["c1"])
    assert code == 1 and json.loads(out.out)["verdict"] == "Rejected"


def test_certify_embedded_certificate(capsys, files):
    code, out = run(capsys, "certify", "--word", files["s"])
    assert code == 0 and json.loads(out.out)["verdict"] == "Accepted"


def test_bound(capsys, files):
    code, out = run(capsys, "bound", "--word", files["s"], "--ell", "3")
    res = json.loads(out.out)
    assert code == 0 and res["z"] == 3 and res["b"] == 3
    code, out = run(capsys, "bound", "--word", files["ft"], "--ell", "2")
    assert json.loads(out.out)["b"] == 4


def test_stabilize(capsys, files):
    code, out = run(capsys, "stabilize", "--a", files["ft"], "--b", files["s"], "--steps", "5", "-M", "20")
    rep = json.loads(out.out)
    assert code == 0 and rep["verdict"] == "Converging"
    assert [s["qdiff_ft"] for s in rep["steps"]] == [5, 11, 17, 23, 29]
    code, _ = run(capsys, "stabilize", "--a", files["ft"], "--b", files["s"], "--max-states", "3")
    assert code == 2


def test_stabilize_table_matches_json(capsys, files):
    _, js = run(capsys, "stabilize", "--a", files["ft"], "--b", files["s"], "--steps", "3")
    _, tb = run(capsys, "stabilize", "--a", files["ft"], "--b", files["s"], "--steps", "3", "--format", "table")
    rows = tb.out.strip().splitlines()
    cols = rows[0].split("\t")
    steps = json.loads(js.out)["steps"]
    for line, step in zip(rows[1:4], steps):
        cells = dict(zip(cols, line.split("\t")))
        assert cells["digest"] == step["digest"]
        assert cells["qdiff_ft"] == str(step["qdiff_ft"])


def test_euler_round_trip_and_determinism(capsys):
    argv = ["euler", "--word", "1 -2 1", "--gamma", "1,2,1", "--N", "2"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a.out == b.out
    obj = json.loads(a.out)
    op = OperatorQ.from_json(obj)
    assert op.digest(20) == obj["digest"]


def test_skeleton_modes(capsys):
    for mode in ("cone", "posneg", "full"):
        code, out = run(capsys, "skeleton", "--word", "1 1", "--gamma", "1,2", "--N", "3", "--mode", mode)
        assert code == 0 and json.loads(out.out)["euler_ok"]
    code, _ = run(capsys, "skeleton", "--word", "1", "--gamma", "1,2", "--N", "3")
    assert code == 2


def test_clasp_and_projector(capsys):
    code, out = run(capsys, "clasp", "--word", "1 2 1 2", "--gamma", "1,1,1")
    assert code == 0 and "position" in json.loads(out.out)
    code, out = run(capsys, "projector", "--gamma", "1,1", "--N", "2", "--steps", "3")
    rows = json.loads(out.out)["steps"]
    assert [r["idempotence"] for r in rows] == [4, 8, 12]


def test_bi(capsys, files):
    code, out = run(capsys, "bi", "--word", files["bi"], "--steps", "4", "-M", "12")
    rep = json.loads(out.out)
    assert code == 0 and rep["shift_invariant"]


def test_input_errors(capsys, files):
    code, out = run(capsys, "purity", "--word", files["bad"])
    assert code == 2 and "bad.json:2:" in out.err
    assert run(capsys, "cs", "--gamma", "1,x")[0] == 2
    assert run(capsys, "cs", "--gamma", "3", "--N", "2")[0] == 2
    assert run(capsys, "purity", "--word", "/nonexistent.json")[0] == 2
    assert run(capsys, "euler", "--word", "5", "--gamma", "1,1")[0] == 2
    assert run(capsys, "purity", "--word", files["fig1"], "--steps", "0")[0] == 2
    assert run(capsys, "nosuch")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "colortwist", "cs", "--gamma", "2,2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["colorSize"] == 2
