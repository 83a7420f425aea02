import io
import json
import subprocess
import sys

import pytest

from arpsadic.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_orbit_text():
    code, out, _ = call("orbit", "--vector", "1,pi,sqrt(2)", "--steps", "5", "--format", "text")
    assert code == 0 and out.split() == ["A2", "P13", "A2", "A3", "A1"]


def test_orbit_json_marks_termination():
    code, out, _ = call("orbit", "--vector", "1,1,1", "--steps", "3")
    assert code == 0 and json.loads(out) == {"vector": "1,1,1", "steps": [], "terminated": True}


def test_complexity_literal_table():
    code, out, _ = call("complexity", "--directive", "p23 p23 p13 p23 p23 a1 a3 a2", "--seed", "1", "--literal", "--nmax", "10")
    data = json.loads(out)
    assert code == 0
    assert data["p"] == [1, 3, 5, 8, 11, 15, 19, 23, 27, 31, 35]
    assert data["s"] == [2, 2, 3, 3, 4, 4, 4, 4, 4, 4, 3]
    assert data["b"] == [0, 1, 0, 1, 0, 0, 0, 0, 0, -1, 0]


def test_complexity_csv_and_bound_check():
    from arpsadic.sadic import word_from_labels

    word = word_from_labels("p23 p23 p13 p23 p23 a1 a3 a2".split())
    code, out, _ = call("complexity", "--word", word, "--nmax", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["n,p,s,b", "0,1,2,0", "1,3,2,1", "2,5,3,0", "3,8,3,1"]
    code, _, err = call("complexity", "--word", "12322123232212321", "--nmax", "3")
    assert code == 1 and "both sides" in err
    code, _, _ = call("complexity", "--directive", "p23 p23 p13 p23 p23 a1 a3 a2", "--literal", "--nmax", "10", "--check-bounds")
    assert code == 2


def test_automaton_check():
    code, out, _ = call("automaton", "check", "p23 p13")
    assert code == 2 and json.loads(out)["rejected_at"] == 1
    code, out, _ = call("automaton", "check", "a2 p13 a2")
    assert code == 0
    code, out, _ = call("automaton", "check")
    assert code == 0 and json.loads(out)["isomorphic_to_G"]


def test_bispecial_records():
    code, out, _ = call("bispecial", "--directive", "p23 p23 p13 p23 p23 a1 a3 a2", "--literal", "--nmax", "4")
    rows = json.loads(out)
    assert code == 0
    assert [(r["word"], r["m"], r["age"]) for r in rows if r["m"]] == [
        ("3", 1, 1), ("23", -1, 1), ("33", 1, 2), ("333", 1, 3), ("3233", -1, 2), ("3333", 1, 4)
    ]
    assert [r["length"] for r in rows] == sorted(r["length"] for r in rows)


def test_genealogy_verify_exit_codes():
    code, out, _ = call("genealogy", "verify", "--vector", "1,pi,sqrt(2)", "--window", "40", "--nmax", "60")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = call("genealogy", "verify", "--directive", "p23 p23 p13 p23 p23 a1 a3 a2", "--literal", "--nmax", "20")
    assert code == 2


def test_generate_and_directive():
    code, out, _ = call("generate", "--directive", "a2 p13 a2 a3", "--literal", "--length", "100")
    assert out.strip() == "1232212323221232"
    code, out, _ = call("directive", "--vector", "1,pi,sqrt(2)", "--length", "5")
    assert json.loads(out)["labels"] == ["a2", "p13", "a2", "a3", "a1"]


def test_convergence_output():
    code, out, _ = call("convergence", "--vector", "1,pi,sqrt(2)", "--steps", "100")
    trace = json.loads(out)["trace"]
    assert code == 0 and len(trace) == 100 and float(trace[-1]["cone_diameter"]) < 1e-6


@pytest.mark.parametrize(
    "argv",
    [
        ("orbit", "--vector", "1,x,2"),
        ("complexity", "--nmax", "5"),
        ("complexity", "--word", "1234", "--nmax", "3"),
        ("automaton", "check", "p23 q13"),
        ("generate", "--directive", "a1", "--word", "12"),
        ("nonsense",),
    ],
)
def test_input_errors_exit_one(argv):
    code, _, err = call(*argv)
    assert code == 1


def test_output_is_byte_identical_between_runs():
    argv = ["bispecial", "--vector", "1,pi,sqrt(2)", "--window", "40", "--nmax", "40"]
    assert call(*argv) == call(*argv)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "arpsadic", "orbit", "--vector", "1,pi,sqrt(2)", "--steps", "2", "--format", "text"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and res.stdout.split() == ["A2", "P13"]
