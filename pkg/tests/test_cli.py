import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from artifact import calculus
from artifact.cli import run
from artifact.hypsheaf import read_sheaf, tilted_a1

DATA = Path(__file__).resolve().parent.parent / "data"


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], stdout=buf)
    return code, json.loads(buf.getvalue())


def test_faces_of_a3():
    code, rep = call("faces", DATA / "a3.json")
    assert code == 0
    assert rep["result"]["count"] == 13 and rep["result"]["euler_sum"] == 1
    assert len(rep["input_sha256"]) == 64


def test_vanish_on_tilted():
    code, rep = call("vanish", "--f", "1", "--face", "0", DATA / "tilted.json")
    assert code == 0
    assert rep["result"] == {"dim": 1, "gamma_acyclic": True, "delta_acyclic": True,
                             "laplacian_iso": {"1": True}}


def test_vanish_non_polarization_is_domain_error():
    code, rep = call("vanish", "--f", "1,0", "--face", "00", DATA / "const_a2.json")
    assert code == 1 and rep["status"] == "error"


def test_fourier_writes_skyscraper(tmp_path):
    out = tmp_path / "out.json"
    code, rep = call("fourier", DATA / "const_a1.json", "-o", out)
    assert code == 0 and rep["result"]["zero_dual_face_matches_origin"]
    assert read_sheaf(out).dims == [1, 0, 0]


def test_rgamma_and_stalk():
    code, rep = call("rgamma", "--full", DATA / "const_a2.json")
    assert rep["result"]["cohomology"]["nonzero"] == {"-2": 1}
    code, rep = call("rgamma", "--compact", DATA / "const_a2.json")
    assert rep["result"]["cohomology"]["nonzero"] == {"2": 1}
    code, rep = call("stalk", "--face", "0", DATA / "tilted.json")
    assert code == 0 and rep["result"]["hyperbolic_from_stalks"]


def test_specialize_and_bispec(tmp_path):
    out = tmp_path / "spec.json"
    code, rep = call("specialize", "--flat", "1", DATA / "const_a2.json", "-o", out)
    assert code == 0 and rep["result"]["validates"]
    code, rep = call("bispec", "--flatN", "0,1", "--flatM", "0", DATA / "const_a2.json")
    assert code == 0 and rep["result"]["consistent"]


def test_library_and_cli_agree():
    code, rep = call("fourier", DATA / "tilted.json")
    assert rep["result"]["dims"] == calculus.fourier(tilted_a1()).dims


def test_fourier_check_parallel():
    code, rep = call("fourier-check", "--jobs", "2", DATA / "tilted.json")
    assert code == 0 and rep["result"]["all"]


def test_validate_reports_failure(tmp_path):
    data = tilted_a1().to_json()
    key = next(iter(data["gamma"]))
    data["gamma"][key] = [["0", "0"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, rep = call("validate", bad)
    assert code == 1 and not rep["result"]["ok"]


def test_check_identities_and_dual():
    code, rep = call("check-identities", DATA / "generic4.json")
    res = rep["result"]
    assert code == 0 and res["euler_relation"] and res["diamonds"]
    assert res["inclusion_exclusion"]["u_from_v"] and res["inclusion_exclusion"]["v_from_u"]
    code, rep = call("dual", DATA / "a3.json")
    assert rep["result"]["double_dual_contains_original"]


def test_microlocalize_reports():
    code, rep = call("microlocalize", "--flat", "0", DATA / "const_a2.json")
    assert code == 0 and rep["result"]["experimental"] and rep["result"]["validates"]


@pytest.mark.parametrize("argv,code", [
    (["faces", "missing.json"], 2),
    (["validate", "DATA/a1.json"], 2),   # arrangement file where a sheaf is required
    (["stalk", "--face", "0x", "DATA/tilted.json"], 1),
    (["fourier", "DATA/braid3.json"], 2),
    (["bogus"], 2),
])
def test_exit_codes(argv, code, tmp_path):
    argv = [a.replace("DATA", str(DATA)) for a in argv]
    got, rep = call(*argv)
    assert got == code and rep["exit"] == code


def test_non_json_input(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("[1, 2")
    code, rep = call("faces", p)
    assert code == 2


def test_module_entry_point_pretty():
    proc = subprocess.run([sys.executable, "-m", "artifact", "faces", str(DATA / "a1.json"), "--pretty"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["count"] == 3
    assert "\n  " in proc.stdout
