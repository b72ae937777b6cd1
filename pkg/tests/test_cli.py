import json
import subprocess
import sys

import pytest

from dwinv.cli import main, parse_surgery


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return _run


def test_parse_surgery():
    assert parse_surgery("1/0") == [(1, 0)]
    assert parse_surgery("2/1, -3/2,5") == [(2, 1), (-3, 2), (5, 1)]
    with pytest.raises(ValueError):
        parse_surgery("1/0,,2")


def test_unknot_three_sphere(run, fixtures_dir, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run("invariant", "--group", fixtures_dir / "groups/z5.json", "--diagram",
                          fixtures_dir / "unknot.morse", "--surgery", "1/0", "--json", out)
    assert code == 0 and "DW = 0.2" in stdout
    rep = json.loads(out.read_text())
    assert rep["dw"] == {"re": 0.2, "im": 0.0}
    assert rep["values"] == [{"F": "0/1", "multiplicity": 1}]


def test_unknot_lens_space(run, fixtures_dir, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run("invariant", "--group", fixtures_dir / "groups/z5.json", "--cocycle",
                     fixtures_dir / "zero_cocycle.json", "--diagram", fixtures_dir / "unknot.morse",
                     "--surgery", "5/1", "--json", out)
    rep = json.loads(out.read_text())
    assert code == 0 and rep["dw"]["re"] == 1.0 and rep["counts"]["representations"] == 5


def test_figure_eight_three_sphere_with_generator(run, fixtures_dir, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run("invariant", "--group", fixtures_dir / "groups/d5.json", "--generator", "0:2",
                     "--diagram", fixtures_dir / "figure8.morse", "--surgery", "1/0", "--json", out)
    rep = json.loads(out.read_text())
    assert code == 0 and rep["dw"] == {"re": 0.1, "im": 0.0}
    assert rep["cocycle"]["normalized_here"] is True


def test_reports_are_deterministic(run, fixtures_dir, tmp_path):
    args = ["invariant", "--group", fixtures_dir / "groups/d5.json", "--cocycle",
            fixtures_dir / "cocycles/d5_class2.json", "--diagram", fixtures_dir / "figure8.morse",
            "--surgery", "2/1", "--per-rep"]
    run(*args, "--json", tmp_path / "a.json")
    run(*args, "--json", tmp_path / "b.json")
    a, b = (tmp_path / "a.json").read_bytes(), (tmp_path / "b.json").read_bytes()
    assert a == b
    rep = json.loads(a)
    assert len(rep["reps"]) == rep["counts"]["representations"]
    assert all("/" in r["F"] for r in rep["reps"])


def test_dedup_flag_keeps_values(run, fixtures_dir, tmp_path):
    base = ["invariant", "--group", fixtures_dir / "groups/d5.json", "--cocycle",
            fixtures_dir / "cocycles/d5_class2.json", "--diagram", fixtures_dir / "figure8.morse",
            "--surgery", "3/1"]
    run(*base, "--json", tmp_path / "a.json")
    run(*base, "--dedup-conj", "--json", tmp_path / "b.json")
    a, b = (json.loads((tmp_path / n).read_text()) for n in ("a.json", "b.json"))
    assert a["values"] == b["values"] and a["dw"] == b["dw"]


def test_exit_codes(run, fixtures_dir):
    code, _, err = run("invariant", "--group", fixtures_dir / "groups/z2.json", "--generator", "0",
                       "--diagram", fixtures_dir / "unknot.morse", "--surgery", "1/0")
    assert code == 3 and json.loads(err)["error"] == "no_solution"
    code, _, err = run("invariant", "--group", fixtures_dir / "groups/z5.json", "--diagram",
                       fixtures_dir / "unknot.morse", "--surgery", "2/4")
    assert code == 2 and json.loads(err)["exit"] == 2
    code, _, err = run("invariant", "--group", fixtures_dir / "missing.json", "--diagram",
                       fixtures_dir / "unknot.morse", "--surgery", "1/0")
    assert code == 2 and set(json.loads(err)) == {"error", "message", "exit"}
    code, _, _ = run("invariant", "--group", fixtures_dir / "groups/z5.json", "--diagram",
                     fixtures_dir / "figure8.morse", "--surgery", "1/0,1/0")
    assert code == 2


def test_cocycle_find(run, fixtures_dir, tmp_path):
    code, stdout, _ = run("cocycle", "find", "--group", fixtures_dir / "groups/z2.json", "--m", 2,
                          "--out", tmp_path / "z2")
    survey = json.loads((tmp_path / "z2" / "survey.json").read_text())
    assert code == 0
    assert survey["generators"] == [{"index": 0, "order": 2}]
    assert {tuple(r["class"]): r["strongly_normalizable"] for r in survey["classes"]} == {(0,): True, (1,): False}

    code, _, _ = run("cocycle", "find", "--group", fixtures_dir / "groups/trivial.json", "--out", tmp_path / "t")
    survey = json.loads((tmp_path / "t" / "survey.json").read_text())
    assert code == 0 and survey["generators"] == [] and survey["classes"] == []

    code, _, _ = run("cocycle", "find", "--group", fixtures_dir / "groups/z5.json", "--out", tmp_path / "z5")
    survey = json.loads((tmp_path / "z5" / "survey.json").read_text())
    assert all(r["strongly_normalizable"] for r in survey["classes"])
    assert (tmp_path / "z5" / "cocycle_1.json").exists()


def test_cocycle_find_output_roundtrips(run, fixtures_dir, tmp_path):
    run("cocycle", "find", "--group", fixtures_dir / "groups/d5.json", "--out", tmp_path)
    code, stdout, _ = run("invariant", "--group", fixtures_dir / "groups/d5.json", "--cocycle",
                          tmp_path / "cocycle_2.json", "--diagram", fixtures_dir / "unknot.morse",
                          "--surgery", "0/1")
    assert code == 0 and "DW = 1 " in stdout


def test_diagram_check(run, fixtures_dir):
    code, stdout, _ = run("diagram", "check", "--diagram", fixtures_dir / "figure8.morse")
    info = json.loads(stdout)
    assert code == 0
    assert info["components"] == 1 and info["crossings"] == 4 and info["writhe"] == [0]
    code, stdout, _ = run("diagram", "check", "--diagram", fixtures_dir / "chain3.morse")
    info = json.loads(stdout)
    assert info["linking"] == [[0, 1, 1], [1, 0, -1], [1, -1, 0]]


def test_diagram_check_rejects_bad_input(run, tmp_path):
    bad = tmp_path / "bad.morse"
    bad.write_text("cup ccw 0\n")
    code, _, err = run("diagram", "check", "--diagram", bad)
    assert code == 2 and json.loads(err)["error"]


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "dwinv", "diagram", "check", "--diagram",
                           str(fixtures_dir / "unknot.morse")], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["arcs"] == 1
