from __future__ import annotations

import json
import subprocess
import sys

import pytest

from conftest import CORPUS
from geohom.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def corpus(name):
    return str(CORPUS / name)


def test_betti_octahedron(capsys):
    status, out, _ = run(capsys, "betti", "--input", corpus("octahedron.geo"))
    assert status == 0
    assert out.strip() == "octahedron: 1 0 1"


def test_validate_mobius_fails(capsys):
    status, out, err = run(capsys, "validate", "--input", corpus("mobius.geo"))
    assert status == 1
    assert "orientation-coherence" in out
    record = json.loads(err.strip().splitlines()[-1])
    assert record["status"] == 1 and record["error"] == "validation"


def test_validate_reflection_fails(capsys):
    status, out, _ = run(capsys, "validate", "--input", corpus("reflection.geo"))
    assert status == 1 and "orientation-reversing" in out


@pytest.mark.parametrize("name", ["octahedron.geo", "spaces.geo", "actions.geo", "chains.geo",
                                  "quotient_chain.geo", "manifolds.geo", "products.geo", "disk_rotation.geo"])
def test_validate_good_files(capsys, name):
    status, out, _ = run(capsys, "validate", "--input", corpus(name))
    assert status == 0, out


def test_strata_disk_rotation(capsys):
    status, out, _ = run(capsys, "strata", "--input", corpus("disk_rotation.geo"))
    assert status == 0
    assert "depth 0: 2 strata" in out
    assert "frontier: ok" in out and "FAILED" not in out


def test_structured_report(capsys):
    status, out, _ = run(capsys, "strata", "--input", corpus("disk_rotation.geo"), "--report", "structured")
    data = json.loads(out)
    entry = data["actions"]["disk_rotation"]
    interior = next(d for d in entry["space"]["by_depth"] if d["depth"] == 0)
    assert len(interior["strata"]) == 2
    assert entry["descend_ok"] and not entry["space"]["violations"]


def test_compare_and_boundary(capsys):
    status, out, _ = run(capsys, "compare", "--input", corpus("chains.geo"))
    assert status == 0 and "chain-map loop: ok" in out
    status, out, _ = run(capsys, "boundary", "--input", corpus("chains.geo"), "disk")
    assert status == 0
    assert "boundary of disk: 3 terms; boundary squared empty: True" in out


def test_boundary_output_parses_back(tmp_path, capsys):
    out_path = tmp_path / "bd.geo"
    status, _, _ = run(capsys, "boundary", "--input", corpus("chains.geo"), "disk", "--output", str(out_path))
    assert status == 0
    status, out, _ = run(capsys, "validate", "--input", corpus("chains.geo"), "--input", str(out_path))
    assert status == 0, out


def test_product_double_quotient_kunneth(capsys):
    status, out, _ = run(capsys, "product", "--input", corpus("products.geo"), "segment", "segment")
    assert status == 0 and "chain segment.x.segment unit.x.unit 2" in out
    status, out, _ = run(capsys, "product", "--input", corpus("manifolds.geo"), "interval", "circle")
    assert status == 0 and "complex interval.x.circle 2 corners" in out
    status, out, _ = run(capsys, "double", "--input", corpus("manifolds.geo"), "triangle")
    assert status == 0 and "betti 1 0 1" in out
    status, out, _ = run(capsys, "quotient", "--input", corpus("actions.geo"), "z3_nonagon")
    assert status == 0 and "0 subdivisions, orbit space betti 1 1" in out
    status, out, _ = run(capsys, "kunneth", "--input", corpus("spaces.geo"), "hollow_triangle", "mobius")
    assert status == 0 and "kunneth: ok" in out


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.geo"
    bad.write_text("complex e 1\nvertices a b\n")
    status, out, err = run(capsys, "betti", "--input", str(bad))
    assert status == 2 and out == ""
    record = json.loads(err)
    assert record["error"] == "parse" and record["line"] == 1


def test_unknown_reference_exit_code(capsys):
    status, _, err = run(capsys, "betti", "--input", corpus("octahedron.geo"), "nothing")
    assert status == 2 and json.loads(err)["error"] == "reference"


def test_missing_file_exit_code(tmp_path, capsys):
    status, _, err = run(capsys, "betti", "--input", str(tmp_path / "none.geo"))
    assert status == 2 and json.loads(err)["error"] == "io"


def test_invalid_input_to_computation(capsys):
    status, _, err = run(capsys, "double", "--input", corpus("mobius.geo"), "mobius")
    assert status == 1
    assert any(v["code"] == "orientation-coherence" for v in json.loads(err)["violations"])


@pytest.mark.parametrize(
    "argv",
    [
        ["betti", "--input", "octahedron.geo"],
        ["strata", "--input", "actions.geo"],
        ["compare", "--input", "quotient_chain.geo"],
        ["quotient", "--input", "actions.geo", "--report", "structured"],
        ["boundary", "--input", "chains.geo"],
    ],
)
def test_output_is_deterministic(argv):
    argv = [corpus(a) if a.endswith(".geo") else a for a in argv]
    cmd = [sys.executable, "-m", "geohom.cli", *argv]
    first = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert first == second and first
