import io
import json

import jsonschema
import pytest

from sdml.cli import main
from sdml.fixtures import data_path


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err, stdin=io.StringIO(stdin))
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--format", "json")
    data = json.loads(out)
    name = data["command"].replace(" ", "-")
    schema = json.loads(data_path("schemas", f"{name}.schema.json").read_text())
    jsonschema.validate(data, schema)
    return code, data


def test_check_prints_truth_value():
    assert run("check", "--model", "intro.json", "--world", "v", "--formula", "[-p]<>q") == (0, "true\n", "")
    code, out, _ = run("check", "--model", "intro", "--world", "i", "--formula", "[-p][][-q][]false")
    assert (code, out) == (0, "true\n")


def test_check_unknown_world_is_an_input_error():
    code, out, err = run("check", "--model", "intro.json", "--world", "zzz", "--formula", "p")
    assert code == 2 and out == "" and "zzz" in err


@pytest.mark.parametrize("argv", [
    ("check", "--model", "intro.json", "--world", "v"),
    ("check", "--model", "nowhere.json", "--world", "v", "--formula", "p"),
    ("check", "--model", "intro.json", "--world", "v", "--formula", "[-p"),
    ("check", "--model", "intro.json", "--world", "v", "--formula", "zz", "--strict"),
    ("frobnicate",),
])
def test_usage_and_input_errors(argv):
    code, _, err = run(*argv)
    assert code == 2 and err.startswith("sdml: error:")


def test_check_trace_and_json():
    code, data = run_json("check", "--model", "intro", "--world", "i", "--formula",
                          "[-p][][-q][]false", "--trace")
    assert code == 0 and data["value"] is True
    assert data["trace"][0]["removed"] == [["i", "v"]]


def test_check_global_semantics():
    code, out, _ = run("check", "--model", "p_cycle", "--world", "w1", "--formula",
                       "[-q]<><>q", "--semantics", "global")
    assert (code, out) == (0, "false\n")


def test_translate():
    code, out, _ = run("translate", "--to", "hybrid", "--formula", "[-p]q")
    assert (code, out) == (0, "!x0 q\n")
    code, out, _ = run("translate", "--to", "fol", "--formula", "p")
    assert out.strip() == "P_p x"
    code, data = run_json("translate", "--to", "fol", "--formula", "<>[-<>p1][]p2", "--simplify")
    assert code == 0 and data["result"].startswith("Ex ")


def test_verify_translation():
    code, out, _ = run("verify-translation", "--to", "fol", "--random", "500", "--seed", "7",
                       "--max-worlds", "5")
    assert code == 0
    assert out.startswith("# seed: 7\n")
    assert "agreement 500/500" in out
    code, data = run_json("verify-translation", "--to", "hybrid", "--random", "50", "--seed", "1")
    assert code == 0 and data["agreed"] == data["instances"] == 50


def test_equivalence_methods():
    base = ("equiv", "--model1", "p_cycle", "--w1", "w1", "--model2", "p_loop", "--w2", "v1")
    code, data = run_json(*base, "--method", "standard")
    assert code == 0 and data["verdict"] == "bisimilar"
    code, data = run_json(*base, "--method", "formulas")
    assert data["verdict"] == "distinguished" and data["witness"]
    code, data = run_json(*base, "--method", "setgame")
    assert data["verdict"] == "not-set-bisimilar"
    code, data = run_json("equiv", "--model1", "two_cycle", "--w1", "w1", "--model2", "one_cycle",
                          "--w2", "v", "--max-size", "10")
    assert data["verdict"] == "equivalent-up-to-bound"


def test_game_solve():
    args = ("game", "solve", "--model", "intro", "--start", "i", "--goals", "t,g")
    code, data = run_json(*args, "--atoms", "p,q")
    assert code == 0 and data["winner"] == "A"
    assert data["play"] == ["A cut p", "E move s", "A cut q"]
    code, data = run_json(*args, "--variant", "single-edge")
    assert data["winner"] == "E"


def test_game_play_as_e(tmp_path):
    path = tmp_path / "moves.txt"
    code, out, _ = run("game", "play", "--model", "intro", "--start", "i", "--goals", "t,g",
                       "--atoms", "p,q", "--as", "E", "--transcript", str(path),
                       stdin="move s\n")
    assert code == 0 and out.rstrip().endswith("winner: A")
    assert path.read_text().splitlines() == ["A cut p", "E move s", "A cut q"]


def test_game_formula():
    code, data = run_json("game", "formula", "--rounds", "1", "--goal-atom", "goal")
    assert code == 0 and "[-p]" in data["formula"]


def test_lab_commands_small():
    code, data = run_json("lab", "reflexive", "--max-worlds", "2")
    assert code == 0 and data["ok"]
    code, data = run_json("lab", "phi-infinity", "--max-worlds", "2")
    assert code == 0 and data["ok"]
    code, data = run_json("lab", "validities", "--max-worlds", "2")
    assert code == 0 and data["ok"]


def test_lab_search():
    code, data = run_json("lab", "search", "--schema", "box_unfold", "--max-worlds", "2")
    assert code == 0 and data["counterexample"] is not None
    code, data = run_json("lab", "search", "--schema", "box_unfold", "--max-worlds", "2",
                          "--semantics", "global")
    assert code == 0 and data["counterexample"] is None


def test_gen_echoes_seed_and_is_reproducible():
    first = run("gen", "model", "--seed", "5", "--worlds", "3")
    assert first == run("gen", "model", "--seed", "5", "--worlds", "3")
    assert first[1].startswith("# seed: 5\n")
    code, data = run_json("gen", "formula", "--seed", "2", "--count", "3")
    assert code == 0 and len(data["formulas"]) == 3


@pytest.mark.parametrize("argv", [
    ("check", "--model", "order_matters", "--world", "w", "--formula", "[-p][-<><>p]<>q", "--trace"),
    ("translate", "--to", "fol", "--formula", "<>[-<>p1][]p2"),
    ("verify-translation", "--to", "hybrid", "--random", "40", "--seed", "3"),
    ("equiv", "--model1", "two_successors", "--w1", "w", "--model2", "one_successor", "--w2", "v"),
    ("game", "solve", "--model", "intro", "--start", "i", "--goals", "t,g", "--atoms", "p,q"),
    ("lab", "search", "--schema", "box_unfold", "--max-worlds", "2"),
    ("gen", "formula", "--seed", "11", "--count", "4"),
])
def test_text_output_is_byte_identical_across_runs(argv):
    assert run(*argv) == run(*argv)
