from __future__ import annotations

import xml.etree.ElementTree as ET

import pytest

from stairpack.cli import main
from stairpack.fileformat import read_packing
from stairpack.packing import is_normal, validate

TWO = "1 2\n0 0\n1/2 1/2\n"
THREE = "2 3\n0 0\n1/4 1/4\n1/2 1/2\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {"two": TWO, "three": THREE, "bad": "1 2\n0 0\n1/4 1/4\n",
                       "dup": "2 2\n0 0\n0 0\n", "junk": "this is not a packing\n"}.items():
        f = tmp_path / f"{name}.txt"
        f.write_text(text)
        paths[name] = str(f)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(files, capsys):
    assert run(capsys, "validate", files["two"])[:2] == (0, "OK\n")
    code, out, _ = run(capsys, "validate", files["bad"])
    assert code == 2 and out.startswith("VIOLATION indices 0 1 witness")
    code, _, err = run(capsys, "validate", files["junk"])
    assert code == 1 and "line 1" in err
    assert run(capsys, "validate", files["two"] + ".missing")[0] == 1


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "lattice", "-k", "9")[0] == 1
    assert run(capsys)[0] == 1


def test_stairify(files, capsys, tmp_path):
    svg = tmp_path / "two.svg"
    code, out, _ = run(capsys, "stairify", files["two"], "--svg", str(svg))
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines() if line[:1].isdigit()]
    assert [row[2] for row in rows] == ["1", "0"]
    assert "sum r = 1 <= (2k-1)N = 2" in out
    assert "FAIL" not in out
    ET.fromstring(svg.read_text())

    code, out, _ = run(capsys, "stairify", files["three"])
    assert code == 0 and "sum r = 1 <= (2k-1)N = 9" in out

    code, _, err = run(capsys, "stairify", files["dup"])
    assert code == 2 and "not normal; run normalize" in err


def test_certify(files, capsys):
    code, out, _ = run(capsys, "certify", files["two"])
    assert code == 0
    assert out.splitlines() == ["1/4 <= 4/7", "4/7 <= 4/7", "4/7 <= 3/5", "3/5 <= 2/3", "VERDICT: PASS"]
    assert run(capsys, "certify", files["bad"])[0] == 2


def test_lattice(capsys, tmp_path):
    code, out, _ = run(capsys, "lattice", "-k", "1")
    assert code == 0 and "det = 3/4" in out and "density = 2/3" in out
    out_file = tmp_path / "p.txt"
    code, out, _ = run(capsys, "lattice", "-k", "2", "--window", "20", "--out", str(out_file))
    assert code == 0 and "det = 5/16" in out and "density = 8/5" in out
    assert run(capsys, "validate", str(out_file))[:2] == (0, "OK\n")


def test_search_is_byte_identical(capsys):
    argv = ("search", "-k", "1", "-l", "10", "--seed", "1", "--iters", "1000")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == 0 and first[1] == second[1]
    assert first[1].startswith("1 10\n")


def test_normalize(files, capsys, tmp_path):
    out_file = tmp_path / "norm.txt"
    code, _, _ = run(capsys, "normalize", files["dup"], "--epsilon", "1/10", "--out", str(out_file))
    assert code == 0
    p = read_packing(out_file)
    assert is_normal(p) and validate(p) is None
    assert run(capsys, "normalize", files["dup"], "--epsilon", "2")[0] == 1
    assert run(capsys, "normalize", files["bad"])[0] == 2


def test_shadow(files, capsys, tmp_path):
    p = tmp_path / "lat.txt"
    run(capsys, "lattice", "-k", "2", "--window", "4", "--out", str(p))
    code, out, _ = run(capsys, "shadow", str(p), "--dir", "1,0", "--samples", "400")
    assert code == 0
    last = out.splitlines()[-1]
    assert last.startswith("max multiplicity ") and last.endswith("<= k=2")
    assert run(capsys, "shadow", str(p), "--dir", "0,0")[0] == 1
    assert run(capsys, "shadow", str(p), "--dir", "x")[0] == 1


def test_printed_fractions_reparse(files, capsys):
    from stairpack.fileformat import parse_rational
    from stairpack.geom import fmt
    _, out, _ = run(capsys, "certify", files["two"])
    for tok in out.replace("<=", " ").split():
        if tok[0].isdigit():
            assert fmt(parse_rational(tok)) == tok
