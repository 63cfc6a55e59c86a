import json
import subprocess
import sys

import pytest

from trinomial_lab.cli import run

RIGID = json.dumps({"kind": "hypersurface", "groups": [[2, 3], [5], [7]]})
CASE1 = json.dumps({"kind": "hypersurface", "groups": [[2, 3], [1], [5]]})


def call(*argv):
    status, text, _ = run(list(argv))
    return status, json.loads(text)


def test_classify_rigid():
    status, out = call("classify", RIGID)
    assert status == 0
    assert out["schema"] == "1" and out["command"] == "classify"
    assert out["report"]["rigidity"] == "rigid"


def test_output_is_deterministic():
    a = run(["classify", CASE1])[1]
    b = run(["classify", CASE1])[1]
    assert a == b and a.endswith("\n")
    assert "." not in json.dumps(json.loads(a)["report"]["factorial"])


def test_witness_then_verify(tmp_path):
    status, out = call("witness", CASE1)
    assert status == 0
    assert out["witness"]["tag"] == "rt-case1"
    assert out["relations"][0]["status"] == "yes"
    path = tmp_path / "w.json"
    path.write_text(json.dumps(out))
    status, ver = call("verify", str(path))
    assert status == 0 and ver["verdict"] == "LND"


def test_verify_perturbed_names_relation():
    _, out = call("witness", CASE1)
    images = out["witness"]["images"]
    images["T_11"] = images["T_11"].replace("5*", "6*")
    status, ver = call("verify", json.dumps({"descriptor": json.loads(CASE1), "images": images}))
    assert status == 2
    assert ver["clause"] == "admissibility" and ver["relation_index"] == 0
    assert "g_0" in ver["message"]


def test_verify_not_nilpotent():
    X = json.loads(RIGID)
    status, out = call(
        "verify",
        json.dumps({"descriptor": X, "images": {"T_01": "35*T_01", "T_11": "14*T_11", "T_21": "10*T_21"}}),
    )
    assert status == 2 and out["clause"] == "local-nilpotency"


def test_witness_explicit_tag():
    X = json.dumps({"kind": "hypersurface", "groups": [[2], [2], [1, 1]]})
    status, out = call("witness", X, "--tag", "nenul-gamma", "--params", '{"moved": [0, 1], "pivot": [2, 1]}')
    assert status == 0 and out["witness"]["tag"] == "nenul-gamma"
    status, out = call("witness", X, "--tag", "rt-case1", "--params", '{"variable": [0, 1]}')
    assert status == 2 and out["clause"] == "rt-1"
    status, _ = call("witness", X, "--tag", "nope")
    assert status == 1


def test_witness_rigid_is_precondition():
    status, out = call("witness", RIGID)
    assert status == 2


def test_search_and_grading():
    lin = json.dumps({"kind": "hypersurface", "groups": [[1], [2], [2]]})
    status, out = call("search", lin, "--search-bound", "2", "--first")
    assert status == 0 and out["search"]["verdict"] == "LND found"
    status, out = call("grading", json.dumps({"kind": "hypersurface", "groups": [[2], [3], [5]]}))
    assert out["grading"]["rank"] == 1
    assert sorted(abs(w[0]) for w in out["grading"]["weights"].values()) == [6, 10, 15]


def test_orbit():
    X = {"kind": "hypersurface", "groups": [[2], [2], [1, 1]]}
    status, out = call("orbit", json.dumps({"descriptor": X, "source": [1, 0, 1, -1], "target": [0, 1, 1, -1]}))
    assert status == 0 and out["orbit"]["result"] == "path"
    status, out = call("orbit", json.dumps({"descriptor": X, "source": [1, 1, 1, 1], "target": [0, 1, 1, -1]}))
    assert status == 2 and out["clause"] == "on-variety"


def test_suspend():
    status, out = call("suspend", json.dumps({"base": {"kind": "affine", "names": ["x", "y"]}, "f": "-(x^2+y^3)", "weights": [2, 5]}))
    assert status == 0
    assert out["descriptor"]["groups"] == [[2], [3], [2, 5]]
    status, out = call("suspend", json.dumps({"base": {"kind": "affine", "names": ["x"]}, "f": "x^2", "weights": [2, 2]}))
    assert status == 2 and out["clause"] == "irreducibility"


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "not json"],
        ["classify", json.dumps({"kind": "hypersurface", "groups": [[2.5], [3], [5]]})],
        ["classify", RIGID, "--nilpotency-cap", "0"],
        ["suspend", json.dumps({"base": {"kind": "affine", "names": ["x"]}, "f": "x", "weights": [1.0]})],
        ["orbit", json.dumps({"descriptor": json.loads(RIGID)})],
    ],
)
def test_malformed(argv):
    status, out = call(*argv)
    assert status == 1 and out["error"] == "malformed-input"


def test_corpus_bundled():
    status, out = call("corpus")
    assert status == 0 and out["all_pass"]


def test_corpus_failing_row(tmp_path):
    rows = [{"name": "wrong", "descriptor": json.loads(RIGID), "expect": {"rigidity": "nonrigid"}}]
    path = tmp_path / "rows.json"
    path.write_text(json.dumps({"rows": rows}))
    status, out = call("corpus", str(path))
    assert status == 3 and out["failed"] == 1


def test_entry_point_subprocess(tmp_path):
    dest = tmp_path / "out.json"
    proc = subprocess.run(
        [sys.executable, "-m", "trinomial_lab", "classify", RIGID, "-o", str(dest)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == ""
    assert json.loads(dest.read_text())["report"]["rigidity"] == "rigid"
    proc = subprocess.run([sys.executable, "-m", "trinomial_lab", "classify", "-"], input="[1", capture_output=True, text=True)
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "trinomial_lab", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 1
