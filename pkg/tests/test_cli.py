from __future__ import annotations

import json

import pytest

from multikat import cli
from multikat.multicat import build_E
from multikat.permutative import discrete_cyclic
from multikat.serialize import load, serialize_multicategory, serialize_permutative

from conftest import GOLDEN


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def render(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- validate


def test_validate_builtin(data_dir, capsys):
    code, out, _ = run(["validate", str(data_dir / "e.json")], capsys)
    assert code == 0 and "valid" in out


def test_validate_broken_associativity(tmp_path, capsys):
    doc = serialize_multicategory(build_E(3))
    doc["hom"]["0,1|1"].append("fresh")
    target = doc["hom"]["0,1|1"][0]
    victim = next(k for k, v in doc["comp"].items() if v == target and not k.startswith(target))
    doc["comp"][victim] = "fresh"
    code, out, _ = run(["validate", write(tmp_path, "bad.json", doc)], capsys)
    assert code == 1
    assert "violation:" in out


def test_validate_permutative_not_closed(tmp_path, capsys):
    doc = serialize_permutative(discrete_cyclic(2))
    del doc["tensor_objects"]["0,1"]
    code, _, err = run(["validate", write(tmp_path, "open.json", doc)], capsys)
    assert code == 1 and "invalid" in err


def test_validate_unreadable(tmp_path, capsys):
    code, _, err = run(["validate", str(tmp_path / "nope.json")], capsys)
    assert code == 2 and "cannot read" in err
    garbage = tmp_path / "garbage.json"
    garbage.write_text("not json")
    assert run(["validate", str(garbage)], capsys)[0] == 2


def test_validate_schema_failure(tmp_path, capsys):
    code, _, err = run(["validate", write(tmp_path, "s.json", {"type": "builtin"})], capsys)
    assert code == 1 and "schema" in err


# ---------------------------------------------------------------- ktheory


@pytest.mark.parametrize("stem", ["e", "z2", "sat1"])
def test_ktheory_matches_golden(data_dir, tmp_path, capsys, stem):
    out = tmp_path / "r.json"
    code, _, _ = run(["ktheory", str(data_dir / f"{stem}.json"), "--out", str(out)], capsys)
    assert code == 0
    assert out.read_bytes() == (GOLDEN / f"{stem}.report.json").read_bytes()


def test_bz3_report_matches_golden(data_dir, J_BZ3):
    loaded = load(data_dir / "bz3.json")
    doc = cli.ktheory_report(loaded, levels=3, budget=cli.DEFAULT_BUDGET, gamma=J_BZ3)
    assert render(doc) == (GOLDEN / "bz3.report.json").read_text("utf-8")


def test_reports_identical_across_jobs_and_cache(data_dir, tmp_path, capsys):
    path = str(data_dir / "z2.json")
    outs = []
    for extra in ([], ["--jobs", "3"], ["--cache-dir", str(tmp_path / "c")], ["--cache-dir", str(tmp_path / "c")]):
        target = tmp_path / f"r{len(outs)}.json"
        assert run(["ktheory", path, "--out", str(target), *extra], capsys)[0] == 0
        outs.append(target.read_bytes())
    assert len(set(outs)) == 1
    assert list((tmp_path / "c").glob("*.json"))


def test_timing_is_outside_the_digest(data_dir, capsys):
    _, plain, _ = run(["ktheory", str(data_dir / "z2.json")], capsys)
    _, timed, _ = run(["ktheory", str(data_dir / "z2.json"), "--timing"], capsys)
    a, b = json.loads(plain), json.loads(timed)
    assert "timing" in b and "timing" not in a
    b.pop("timing")
    assert a == b


def test_report_content(data_dir, capsys):
    _, out, _ = run(["ktheory", str(data_dir / "z2.json")], capsys)
    doc = json.loads(out)
    assert doc["very_special"] is True and doc["stable_pi0"] == "Z/2"
    _, out, _ = run(["ktheory", str(data_dir / "sat1.json")], capsys)
    doc = json.loads(out)
    assert doc["special"] is True and doc["very_special"] is False
    assert json.loads((GOLDEN / "bz3.report.json").read_text())["stable_pi1"] == "Z/3"


def test_budget_exhaustion(data_dir, tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, err = run(["ktheory", str(data_dir / "bz3.json"), "--budget", "50", "--out", str(out)], capsys)
    assert code == 2 and "budget" in err
    assert not out.exists() and stdout == ""


def test_levels_need_arity(data_dir, capsys):
    code, _, err = run(["ktheory", str(data_dir / "z2.json"), "--arity-cap", "2"], capsys)
    assert code == 1 and "arity cap" in err


def test_environment_overrides(data_dir, capsys, monkeypatch):
    monkeypatch.setenv("MULTIKAT_LEVELS", "2")
    _, out, _ = run(["ktheory", str(data_dir / "z2.json")], capsys)
    assert json.loads(out)["config"]["levels"] == 2
    # flags win over the environment
    _, out, _ = run(["ktheory", str(data_dir / "z2.json"), "--levels", "1"], capsys)
    assert json.loads(out)["config"]["levels"] == 1


# ---------------------------------------------------------------- check-lemmas


def test_check_lemmas_terminal(tmp_path, capsys):
    path = write(tmp_path, "t.json", {"schema_version": 1, "type": "builtin", "name": "terminal"})
    code, out, _ = run(["check-lemmas", path], capsys)
    assert code == 0
    assert out.count("PASS") == 7


def test_check_lemmas_E_row(data_dir, capsys):
    code, out, _ = run(["check-lemmas", str(data_dir / "e.json")], capsys)
    row = next(line for line in out.splitlines() if "lemma_arrow" in line)
    assert "PASS" in row and "2/2 objects" in row


def test_check_lemmas_all_builtins(tmp_path, capsys):
    out = tmp_path / "rows.json"
    code, _, _ = run(["check-lemmas", "--all-builtins", "--out", str(out)], capsys)
    rows = json.loads(out.read_text())["rows"]
    failing = sorted((r["input"], r["lemma"]) for r in rows if r["status"] != "PASS")
    # only the surjectivity leg of the path-object check fails, on discrete level-1 inputs
    assert failing == [("E", "path_object"), ("E^2", "path_object"), ("wedge(E,E)", "path_object")]
    assert code == 1


def test_check_lemmas_needs_input(capsys):
    assert run(["check-lemmas"], capsys)[0] == 1


def test_check_lemmas_skip_on_budget(tmp_path, capsys):
    path = write(tmp_path, "i.json", {"schema_version": 1, "type": "builtin", "name": "I"})
    code, out, _ = run(["check-lemmas", path, "--budget", "1"], capsys)
    assert "SKIP" in out
    assert code in (1, 2)
