import csv
import io
import json
import subprocess
import sys

import pytest

from torsion_atlas import cli
from torsion_atlas.errors import PrecisionExhausted
from torsion_atlas.verify import CHECKS, coverage_manifest


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_divpoly_symmetric(capsys):
    code, out, _ = run(["divpoly", "--symmetric", "2", "--n", "3"], capsys)
    d = json.loads(out)
    assert code == 0 and d["schema"] == "torsion-atlas/1"
    assert d["polynomial"] == "x^4+4*x^3-x-1" and d["degree_ok"]


def test_divpoly_weierstrass(capsys):
    code, out, _ = run(["divpoly", "--weierstrass", "0,-1,0", "--n", "2"], capsys)
    assert code == 0 and json.loads(out)["polynomial"] == "x^3-x"


def test_divpoly_quintic_degree(capsys):
    code, out, _ = run(["divpoly", "--symmetric", "2", "--n", "5"], capsys)
    assert code == 0 and json.loads(out)["degree"] == 12


def test_divpoly_ramification(capsys):
    code, out, _ = run(["divpoly", "--ramification", "0,1,-1,inf:inf", "--n", "4"], capsys)
    assert code == 0 and json.loads(out)["polynomial"] == "x^6-5*x^4-5*x^2+1"


def test_intersect_from_x(capsys):
    code, out, _ = run(["intersect", "--from-x", "2", "--orders", "3"], capsys)
    d = json.loads(out)
    assert code == 0 and len(d["certificate"]["common"]) == 1
    assert d["certificate"]["count_lower_bound"] == 10


def test_census_csv(capsys):
    code, out, err = run(["intersect", "--census", "3,5", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["a1_minpoly", "a2_minpoly", "order", "point_minpoly", "orbit_class", "count"]
    assert len({r[3] for r in rows[1:]}) >= 1 and all(int(r[5]) >= 14 for r in rows[1:])
    assert len(rows) - 1 == 24 * 2  # u plus one order-5 point per certificate
    assert "[torsion-atlas]" in err


def test_totient(capsys):
    code, out, _ = run(["totient", "--k", "2", "--bound", "50"], capsys)
    assert code == 0 and [35, 40, 42] in [g["n"] for g in json.loads(out)["groups"]]


def test_moduli_scan(capsys):
    code, out, _ = run(["moduli-scan", "--n", "4", "--grid", "2,3,5"], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "all-constant"


def test_closure(capsys):
    code, out, _ = run(["closure", "--seed", "0,1,-1,inf", "--depth", "1"], capsys)
    d = json.loads(out)
    assert code == 0 and d["state"]["size"] == 10 and not d["state"]["truncated"]


@pytest.mark.parametrize("argv", [
    ["divpoly", "--n", "3"],
    ["divpoly", "--symmetric", "1", "--n", "3"],
    ["divpoly", "--weierstrass", "0,0,0", "--n", "3"],
    ["divpoly", "--weierstrass", "a,b,c", "--n", "3"],
    ["intersect", "--from-x", "1"],
    ["closure", "--seed", "0,0,1,inf", "--depth", "1"],
    ["totient", "--bound", "0"],
    ["nonsense"],
    ["totient", "--bound", "5", "--precision", "16"],
])
def test_bad_input_exit(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 5 and out == ""


def test_budget_exit(capsys):
    code, _, err = run(["intersect", "--census", "3,11"], capsys)
    assert code == 3 and "budget" in err
    code, _, _ = run(["intersect", "--census", "3,11", "--extended", "--budget", "1"], capsys)
    assert code == 3


def test_precision_exit(monkeypatch, capsys):
    def boom(*a, **k):
        raise PrecisionExhausted("forced")

    monkeypatch.setattr(cli, "totient_payload", boom)
    code, _, err = run(["totient", "--bound", "5"], capsys)
    assert code == 4 and "precision" in err


def test_env_precision(monkeypatch, capsys):
    monkeypatch.setenv("TORSION_ATLAS_PRECISION", "128")
    code, out, _ = run(["intersect", "--from-x", "3"], capsys)
    assert code == 0 and json.loads(out)["certificate"]["a1"]["ball"]["bits"] == 128
    monkeypatch.setenv("TORSION_ATLAS_PRECISION", "lots")
    code, _, _ = run(["totient", "--bound", "5"], capsys)
    assert code == 5


def test_verify_subset_and_injection(capsys):
    ids = "totient.j2_5_6,divpoly.family_cubic"
    code, out, _ = run(["verify-paper", "--only", ids], capsys)
    assert code == 0 and json.loads(out)["failed"] == []
    code, out, err = run(["verify-paper", "--only", ids, "--inject", "divpoly.family_cubic"], capsys)
    assert code == 2
    assert json.loads(out)["failed"] == ["divpoly.family_cubic"]
    assert "FAIL  divpoly.family_cubic" in err
    code, _, _ = run(["verify-paper", "--inject", "no.such.check"], capsys)
    assert code == 5


@pytest.mark.parametrize("cid", ["totient.scan_6", "exact.reciprocal_3_5", "closure.cube_identity_resolvent",
                                 "projgeom.six_point_classes", "algnum.cubic_roots"])
def test_every_injection_is_caught(cid, capsys):
    code, out, _ = run(["verify-paper", "--only", cid, "--inject", cid], capsys)
    assert code == 2 and json.loads(out)["failed"] == [cid]


def test_coverage_manifest():
    m = coverage_manifest()
    assert len(m) == len(CHECKS) == 59
    assert len({e["id"] for e in m}) == len(m)
    assert [e["id"] for e in m if e["extended"]] == ["cli.extended_probes"]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run(["totient", "--bound", "10", "-o", str(target)], capsys)
    assert code == 0 and out == "" and json.loads(target.read_text())["bound"] == 10


@pytest.mark.parametrize("argv", [
    ["divpoly", "--symmetric", "3/2", "--n", "5"],
    ["intersect", "--from-x", "5/3"],
    ["intersect", "--census", "3,5"],
    ["closure", "--seed", "0,1,-1,inf", "--depth", "1"],
    ["verify-paper", "--only", "totient.scan_50,closure.seed_depth_1"],
])
def test_byte_determinism(argv):
    cmd = [sys.executable, "-m", "torsion_atlas.cli"] + argv
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_census_json(capsys):
    code, out, _ = run(["intersect", "--census", "3,5"], capsys)
    d = json.loads(out)
    assert code == 0 and d["evidence_only"] and d["census"]["elimination"]["C_degrees"]
