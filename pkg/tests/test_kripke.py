import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sdml.errors import ModelError, ResourceCapError, UnknownWorldError
from sdml.fixtures import MODELS, model
from sdml.kripke import (KripkeModel, ModelState, PointedModel, bits, enumerate_models,
                         generated_submodel, load_model, model_count, model_from_index,
                         model_from_json, model_index, model_to_json, orbit_representatives,
                         save_model, to_dot)

from conftest import models


@pytest.fixture
def intro():
    return model("intro")


def test_intro_fixture(intro):
    assert len(intro.worlds) == 6 and intro.edge_count() == 9
    assert intro.valuation["p"] == {"i", "v", "g"}
    assert intro.valuation["q"] == {"s", "u", "t"}


def test_successors(intro):
    s = ModelState(intro)
    assert s.successors("u") == {"t", "g"}
    assert s.delete_from("u", {"t"}).successors("u") == {"g"}
    assert s.successors("g") == frozenset()


def test_delete_from_examples(intro):
    s = ModelState(intro)
    assert s.delete_from("i", {"v"}).removed == (("i", "v"),)
    assert s.delete_from("i", set()) == s
    assert set(s.delete_from("s", {"u", "t"}).removed) == {("s", "u"), ("s", "t")}


def test_delete_global_examples():
    m1 = model("p_cycle")
    s = ModelState(m1)
    assert set(s.delete_global({"w3"}).removed) == {("w1", "w3"), ("w2", "w3")}
    assert s.delete_global(set()) == s
    assert not s.delete_global(m1.worlds).live_edges


def test_unknown_world(intro):
    with pytest.raises(UnknownWorldError):
        ModelState(intro).successors("zzz")


@pytest.mark.parametrize("n, atoms, count", [(1, [], 2), (2, ["p"], 64), (3, ["p", "q"], 32768)])
def test_enumeration_counts(n, atoms, count):
    assert model_count(n, atoms) == count
    if count <= 64:
        ms = list(enumerate_models(n, atoms))
        assert len(ms) == count and len(set(ms)) == count


def test_enumeration_exact_for_three_worlds():
    seen = set(enumerate_models(3, ["p", "q"]))
    assert len(seen) == 32768


def test_enumeration_cap():
    with pytest.raises(ResourceCapError):
        next(enumerate_models(3, ["p"], cap=100))


@given(st.integers(1, 3), st.data())
def test_index_round_trip(n, data):
    k = data.draw(st.integers(0, model_count(n, ["p", "q"]) - 1))
    assert model_index(model_from_index(n, ["p", "q"], k), ["p", "q"]) == k


@given(models(), st.data())
def test_state_invariants(m, data):
    s = ModelState(m)
    for _ in range(3):
        w = data.draw(st.sampled_from(m.worlds))
        targets = data.draw(st.frozensets(st.sampled_from(m.worlds)))
        s = s.delete_from(w, targets) if data.draw(st.booleans()) else s.delete_global(targets)
        assert not (s.live_edges & set(s.removed))
        assert s.live_edges | set(s.removed) == m.edges


@given(models(), st.data())
def test_delete_from_idempotent_and_commuting(m, data):
    s = ModelState(m)
    w1, w2 = data.draw(st.sampled_from(m.worlds)), data.draw(st.sampled_from(m.worlds))
    t1 = data.draw(st.frozensets(st.sampled_from(m.worlds)))
    t2 = data.draw(st.frozensets(st.sampled_from(m.worlds)))
    once = s.delete_from(w1, t1)
    assert once.delete_from(w1, t1) == once
    if w1 != w2:
        assert once.delete_from(w2, t2) == s.delete_from(w2, t2).delete_from(w1, t1)


def test_json_file_round_trip(tmp_path):
    m = model("intro")
    save_model(m, tmp_path / "m.json")
    assert load_model(tmp_path / "m.json") == m


@given(models())
def test_json_round_trip(m):
    assert model_from_json(json.loads(json.dumps(model_to_json(m)))) == m


def test_single_world_round_trip(tmp_path):
    m = KripkeModel.from_sets(["a"], [])
    save_model(m, tmp_path / "a.json")
    assert load_model(tmp_path / "a.json") == m


@pytest.mark.parametrize("data", [
    {"worlds": ["a"], "edges": [["a", "b"]]},
    {"worlds": ["a", "a"], "edges": []},
    {"worlds": [], "edges": []},
    {"worlds": ["a"], "edges": [], "val": {"p": ["b"]}},
    {"worlds": ["a"], "colour": 1},
    [],
])
def test_malformed_models(data):
    with pytest.raises(ModelError):
        model_from_json(data)


def test_all_fixtures_load():
    for name in MODELS:
        assert model(name).n >= 1


def test_pointed_model_checks_point(intro):
    with pytest.raises(UnknownWorldError):
        PointedModel(intro, "nope")


def test_state_rejects_foreign_edges(intro):
    with pytest.raises(ModelError):
        ModelState.with_removed(intro, [("g", "i")])


def test_generated_submodel(intro):
    sub = generated_submodel(intro, "v")
    assert set(sub.worlds) == {"v", "u", "t", "g"}
    assert sub.successors("v") == {"u", "g"}
    assert sub.valuation["q"] == {"u", "t"}


def test_to_dot_marks_removed(intro):
    dot = to_dot(intro, ModelState(intro).delete_from("i", {"v"}))
    assert '"i" -> "v" [style=dashed];' in dot and '"i" -> "s";' in dot


def _permuted(m: KripkeModel, perm, atoms):
    n = m.n
    succ = [0] * n
    for i in range(n):
        succ[perm[i]] = sum(1 << perm[j] for j in bits(m.succ[i]))
    val = tuple((a, sum(1 << perm[j] for j in bits(m.val_mask(a)))) for a in atoms)
    return KripkeModel(m.worlds, tuple(succ), val)


@pytest.mark.parametrize("n, atoms", [(1, ("p",)), (2, ("p", "q")), (3, ())])
def test_orbit_representatives_cover_every_model_once(n, atoms):
    reps = orbit_representatives(n, atoms)
    owner = {}
    for k in reps:
        m = model_from_index(n, atoms, k)
        for perm in itertools.permutations(range(n)):
            owner.setdefault(model_index(_permuted(m, perm, atoms), atoms), set()).add(k)
    assert set(owner) == set(range(model_count(n, atoms)))
    assert all(len(v) == 1 for v in owner.values())


def test_orbit_counts_match_unlabelled_digraphs():
    # digraphs with loops allowed on 3 and 4 unlabelled nodes
    assert len(orbit_representatives(3)) == 104
    assert len(orbit_representatives(4)) == 3044
