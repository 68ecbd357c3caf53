import json

import pytest
from click.testing import CliRunner

from rauzy.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args))
    return go


def test_invariant_of_worked_example(run):
    res = run("invariant", "4 5 1 2 6 3")
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["lambda"] == [2, 2] and out["rank"] == 1 and out["sign"] == 0
    assert out["type"] == {"X": [1, 2]}


def test_reducible_and_malformed_input_exit_2(run):
    assert run("invariant", "2 3 1").exit_code == 2
    assert run("invariant", "1 1 2").exit_code == 2
    assert run("dynamics", "-w", "LX", "2 1 3").exit_code == 2


def test_arf_reports_consistency(run):
    res = run("arf", "1 3 5 2 6 4")
    out = json.loads(res.output)
    assert res.exit_code == 0 and out["consistent"]
    assert abs(out["Abar"]) == out["expected_magnitude"]


def test_dynamics_word(run):
    res = run("dynamics", "--word", "LR", "4 5 1 2 6 3")
    out = json.loads(res.output)
    assert res.exit_code == 0 and out["end"] == "4 6 1 2 5 3"
    assert out["invariant_start"] == out["invariant_end"]


def test_classes_text_and_json(run, tmp_path):
    res = run("classes", "--size", "6")
    assert res.exit_code == 0
    assert "census 6 | ∅|5+ | 22|1 | ∅|5-" in res.output
    assert "FAIL" not in res.output
    path = tmp_path / "c.json"
    res = run("classes", "-n", "7", "--verify", "--json", str(path))
    assert res.exit_code == 0
    data = json.loads(path.read_text())
    assert len(data["classes"]) == 13 and all(v["ok"] for v in data["verdicts"].values())
    assert run("classes", "--size", "12").exit_code == 2


def test_prove_fixture_holds_and_perturbed_spec_fails(run, tmp_path):
    res = run("prove", "--fixture", "opposite_sign_single", "--brute", "5")
    assert res.exit_code == 0 and "IDENTITY HOLDS" in res.output
    from rauzy.arf_prover import dump_identity, load_fixtures
    bad = load_fixtures()["opposite_sign_triple"].perturbed()
    path = tmp_path / "bad.json"
    path.write_text(dump_identity(bad))
    res = run("prove", "--spec", str(path))
    assert res.exit_code == 1 and res.output.startswith("IDENTITY FAILS at v=")


def test_prove_solve_list_and_enumerate(run):
    res = run("prove", "--fixture", "opposite_sign_single", "--solve")
    assert res.exit_code == 0 and res.output.split() == ["1", "1", "-2"]
    res = run("prove", "--list")
    assert "swapped_blocks_sum" in res.output
    res = run("prove", "--enumerate", "2,2,0,0")
    assert res.exit_code == 0
    assert run("prove", "--enumerate", "9,9,3,3").exit_code == 2
    assert run("prove", "--enumerate", "1,2").exit_code == 2
    assert run("prove").exit_code == 2
    assert run("prove", "--fixture", "nope").exit_code == 2


def test_build_i2x_exit_codes(run):
    res = run("build-i2x", "--lambda", "3,3", "--rank", "3", "--sign", "+")
    out = json.loads(res.output)
    assert res.exit_code == 0 and out["lambda"] == [3, 3] and out["sign"] == 1
    assert run("build-i2x", "--lambda", "2", "--rank", "2", "--sign", "0").exit_code == 1
    assert run("build-i2x", "--lambda", "2", "--rank", "1", "--sign", "+").exit_code == 2
    assert run("build-i2x", "--lambda", "x", "--rank", "1").exit_code == 2
    assert run("build-i2x", "--lambda", "3", "--rank", "1", "--sign", "?").exit_code == 2


def test_monodromy_command(run):
    res = run("monodromy", "1 3 5 2 6 4")
    assert res.exit_code == 0
    assert json.loads(res.output)["class_size"] == 66
    assert run("monodromy", "1 2 3 4 8 5 6 7").exit_code == 1
    assert run("monodromy", "1 3 5 2 6 4", "--limit", "10").exit_code == 1


def test_verify_all_range(run):
    assert run("verify-all", "--max-n", "12").exit_code == 2
