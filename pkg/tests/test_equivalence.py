import random

import pytest

from sdml import formula as F
from sdml.checker import evaluate
from sdml.equivalence import (DISTINGUISHED, EQUIVALENT, NOT_SET_BISIMILAR, SET_BISIMILAR,
                              bounded_ld_equiv, describe_config, same_signature, set_dbisim,
                              standard_bisim)
from sdml.errors import ResourceCapError
from sdml.fixtures import model, named
from sdml.kripke import KripkeModel, PointedModel, random_model
from sdml.parser import parse_ld


def pm(name, world):
    return PointedModel(model(name), world)


LOOP_PAIR = (pm("p_cycle", "w1"), pm("p_loop", "v1"))
CYCLES = (pm("two_cycle", "w1"), pm("one_cycle", "v"))
BRANCHING = (pm("two_successors", "w"), pm("one_successor", "v"))


def one_world(p_true):
    return PointedModel(KripkeModel.from_sets(["w"], [], {"p": ["w"] if p_true else []}), "w")


def test_standard_bisim_examples():
    assert standard_bisim(*LOOP_PAIR)[0]
    assert standard_bisim(LOOP_PAIR[0], LOOP_PAIR[0])[0]
    assert not standard_bisim(one_world(True), one_world(False))[0]


def test_bounded_oracle_distinguishes_loop_pair():
    v = bounded_ld_equiv(*LOOP_PAIR, atoms=("p", "q"), max_size=8)
    assert v.outcome == DISTINGUISHED
    left, right = LOOP_PAIR
    w = v.witness if v.witness_holds_left else F.Not(v.witness)
    assert evaluate(left.model, left.point, w) and not evaluate(right.model, right.point, w)
    assert same_signature(left, right, w, parse_ld("[-q]<><>q"))


@pytest.mark.parametrize("pair", [CYCLES, BRANCHING], ids=["cycles", "branching"])
def test_bounded_oracle_finds_no_witness(pair):
    v = bounded_ld_equiv(*pair, atoms=(), max_size=10)
    assert v.outcome == EQUIVALENT and v.witness is None


def test_set_game_examples():
    assert set_dbisim(*CYCLES).outcome == SET_BISIMILAR
    assert set_dbisim(*BRANCHING).outcome == SET_BISIMILAR
    v = set_dbisim(*LOOP_PAIR)
    assert v.outcome == NOT_SET_BISIMILAR
    assert v.failing is not None
    assert "removed" in describe_config(v.failing, LOOP_PAIR[0].model, LOOP_PAIR[1].model)
    assert set_dbisim(LOOP_PAIR[1], LOOP_PAIR[1]).outcome == SET_BISIMILAR


def test_dead_end_definition_true_on_cycle():
    phi = named("seeback.sdml")["PHI1_PLUS"]
    assert evaluate(model("p_cycle"), "w1", phi)


def test_candidate_cap():
    with pytest.raises(ResourceCapError):
        bounded_ld_equiv(*LOOP_PAIR, atoms=("p", "q"), max_size=8, candidate_cap=10)


def _edges(m):
    return sum(bin(s).count("1") for s in m.succ)


def _random_pairs(count, seed, max_edges=10):
    # the game's state space doubles with every edge, so dense pairs are resampled
    rng = random.Random(seed)
    made = 0
    while made < count:
        atoms = rng.choice([(), ("p",)])
        m1 = random_model(rng, rng.randint(1, 4), atoms, edge_prob=rng.choice((0.3, 0.5)))
        m2 = random_model(rng, rng.randint(1, 4), atoms, edge_prob=rng.choice((0.3, 0.5)))
        if _edges(m1) + _edges(m2) > max_edges:
            continue
        made += 1
        yield atoms, PointedModel(m1, m1.worlds[0]), PointedModel(m2, m2.worlds[0])


def test_set_game_is_sound_and_refines_bisimulation():
    pairs = [((), *CYCLES), ((), *BRANCHING), (("p", "q"), *LOOP_PAIR)]
    pairs += list(_random_pairs(200, seed=7))
    related = 0
    for atoms, a, b in pairs:
        if set_dbisim(a, b).outcome != SET_BISIMILAR:
            continue
        related += 1
        assert standard_bisim(a, b)[0]
        assert bounded_ld_equiv(a, b, atoms=atoms, max_size=10).outcome == EQUIVALENT
    assert related >= 5


def test_distinguished_verdicts_hold_up():
    for atoms, a, b in _random_pairs(60, seed=2):
        v = bounded_ld_equiv(a, b, atoms=atoms, max_size=6)
        if v.outcome == DISTINGUISHED:
            assert evaluate(a.model, a.point, v.witness) == v.witness_holds_left
            assert evaluate(b.model, b.point, v.witness) != v.witness_holds_left
