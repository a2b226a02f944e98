import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from qgt.cli import exact_decimal, main
from qgt.graph import dump_graph, interval, star


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def iv(tmp_path):
    path = tmp_path / "interval.json"
    dump_graph(interval(Fraction(3, 2)), path)
    return str(path)


@pytest.fixture
def pair(tmp_path):
    g1, g2 = tmp_path / "g1.json", tmp_path / "g2.json"
    code, _ = run(["bcds", "71", "--seed", "1,3/2,2", "--emit", str(g1), str(g2)])
    assert code == 0
    return str(g1), str(g2)


def test_torsion_interval(iv):
    code, text = run(["torsion", iv])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["k", "A_k", "A_k_decimal"]
    assert rows[1][:2] == ["1", "9/32"]  # L^3 / 12
    assert rows[1][2] == "0.28125"


def test_torsion_exact_has_no_float_formatting(iv):
    code, text = run(["torsion", iv, "--moments", "3", "-o", "json"])
    doc = json.loads(text)
    assert [m["A"] for m in doc["moments"]] == ["9/32", "81/640", "12393/143360"]
    assert doc["moments"][2]["decimal"] == "0.0864467075892857142857142857143"
    assert "e-" not in text


def test_exact_decimal():
    assert exact_decimal(Fraction(1, 3), 5) == "0.33333"


def test_dump_system(iv, tmp_path):
    path = tmp_path / "sys.csv"
    code, _ = run(["torsion", iv, "--dump-system", str(path)])
    assert code == 0
    assert path.read_text() == "0,1,0\n3/2,1,9/8\n"


def test_validate_and_clean(tmp_path):
    path = tmp_path / "chain.json"
    path.write_text(json.dumps({"edges": [{"tail": 0, "head": 2, "length": "1/2"},
                                          {"tail": 2, "head": 1, "length": "1/2"}]}))
    code, text = run(["validate", str(path)])
    assert code == 0 and "degree_two_vertices,1" in text
    out = tmp_path / "clean.json"
    assert run(["clean", str(path), "-o", str(out)])[0] == 0
    assert json.loads(out.read_text()) == {"edges": [{"tail": 0, "head": 1, "length": "1"}]}


def test_invalid_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"edges": [{"tail": 0, "head": 1, "length": "0"}]}))
    assert run(["validate", str(bad)])[0] == 1
    assert run(["torsion", str(tmp_path / "missing.json")])[0] == 1
    assert run(["spectrum", str(bad)])[0] == 1  # missing --kmax
    assert run(["bcds", "71", "--seed", "1,2"])[0] == 1


def test_computation_error(tmp_path):
    theta = tmp_path / "theta.json"
    theta.write_text(json.dumps({"edges": [{"tail": 0, "head": 1, "length": "1"},
                                           {"tail": 0, "head": 1, "length": "2"}]}))
    assert run(["torsion", str(theta)])[0] == 2


def test_bcds_report():
    code, text = run(["bcds", "71", "--seed", "1,2,3", "--report"])
    assert code == 0
    rows = dict(csv.reader(io.StringIO(text)))
    assert rows["difference"] == "100078/34405" == rows["formula"] == rows["hand_assembled"]
    assert rows["verdict"] == "PASS"


def test_bcds_combinatorial():
    code, text = run(["bcds", "71", "--seed", "1,2,3", "--combinatorial"])
    rows = dict(csv.reader(io.StringIO(text)))
    assert code == 0 and rows["verdict"] == "PASS" and rows["char_poly_equal"] == "yes"
    assert rows["difference"] == "-44/4915"


def test_spectrum(tmp_path):
    path = tmp_path / "star.json"
    dump_graph(star([1, 1, 1]), path)
    code, text = run(["spectrum", str(path), "--kmax", "7", "--json"])
    doc = json.loads(text)
    assert code == 0
    assert [e["multiplicity"] for e in doc["eigenvalues"]] == [1, 2, 1, 2]
    assert doc["eigenvalues"][0]["a_sq"] == pytest.approx(24 / 3.141592653589793**2)


def test_heat_content(iv):
    code, text = run(["heat-content", iv, "--t", "0.1,1", "--kmax", "40"])
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and len(rows) == 3
    q1, q2 = float(rows[1][1]), float(rows[2][1])
    assert 0 < q2 < q1 < 1.5


def test_invert(tmp_path, iv):
    moments = tmp_path / "m.csv"
    code, text = run(["torsion", iv, "--moments", "40"])
    moments.write_text(text)
    code, text = run(["invert", "--moments", str(moments), "--depth", "1", "--bits", "256"])
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and rows[0] == ["mu", "a_sq", "est_error"]
    lam1 = (3.141592653589793 / 1.5) ** 2
    assert float(rows[1][0]) == pytest.approx(lam1, rel=1e-12)


def test_invert_bad_csv(tmp_path):
    moments = tmp_path / "m.csv"
    moments.write_text("k,A_k\n1,1/12\n3,1/60\n")
    assert run(["invert", "--moments", str(moments)])[0] == 1


def test_compare_pass(pair):
    code, text = run(["compare", *pair, "--kmax", "6"])
    assert code == 0
    assert text.strip().splitlines()[-1].startswith("# verdict,PASS")


def test_compare_fail(tmp_path, pair):
    other = tmp_path / "other.json"
    dump_graph(star([1, 2, 3]), other)
    assert run(["compare", pair[0], str(other), "--kmax", "3"])[0] == 2


def test_deterministic_across_workers(pair):
    a = run(["spectrum", pair[0], "--kmax", "5", "--json", "--workers", "1"])[1]
    b = run(["spectrum", pair[0], "--kmax", "5", "--json", "--workers", "3"])[1]
    assert a == b


def test_strict_missed_root(monkeypatch, iv):
    import qgt.spectral as sp

    original = sp._clusters
    monkeypatch.setattr(sp, "_clusters", lambda cells: original(cells)[::3])
    assert run(["spectrum", iv, "--kmax", "40"])[0] == 0
    assert run(["spectrum", iv, "--kmax", "40", "--strict"])[0] == 2


def test_console_entry_point(iv):
    proc = subprocess.run([sys.executable, "-m", "qgt.cli", "torsion", iv], capture_output=True, text=True)
    assert proc.returncode == 0 and "9/32" in proc.stdout
