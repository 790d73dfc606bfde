import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sdml import formula as F
from sdml.checker import GLOBAL, LOCAL, Checker, Trace, evaluate, extension, reference_eval
from sdml.errors import UnknownAtomError
from sdml.fixtures import model
from sdml.generate import random_formula
from sdml.kripke import ModelState, random_model
from sdml.parser import parse_ld

from conftest import formulas, models


def holds(name, world, text, semantics=LOCAL):
    return evaluate(model(name), world, parse_ld(text), semantics, strict=True)


def test_intro_extension_of_p():
    assert extension(model("intro"), F.Atom("p")) == {"i", "v", "g"}


def test_extension_of_top():
    assert extension(model("intro"), F.TOP) == set(model("intro").worlds)


def test_intro_examples():
    assert holds("intro", "v", "[-p]<>q")
    assert holds("intro", "i", "[-p][][-q][]false")


def test_order_of_deletions_matters():
    assert holds("order_matters", "w", "[-p][-<><>p]<>q")
    assert not holds("order_matters", "w", "[-<><>p][-p]<>q")


def test_bisimilar_models_differ_on_deletion_formula():
    assert holds("p_cycle", "w1", "[-q]<><>q")
    assert not holds("p_loop", "v1", "[-q]<><>q")
    assert extension(model("p_cycle"), parse_ld("<><>q")) == {"w1", "w2"}


def test_global_deletion_severs_every_source():
    assert not holds("p_cycle", "w1", "[-q]<><>q", GLOBAL)


def test_guards_are_evaluated_in_the_current_state():
    # once w->v1 is gone, no world reaches p in two steps
    m = model("order_matters")
    s = ModelState(m).delete_from("w", {"v1"})
    assert extension(m, parse_ld("<><>p")) == {"v1", "v2"}
    assert extension(s, parse_ld("<><>p")) == set()


@given(models(), st.sampled_from(["p", "q"]), formulas(max_leaves=6))
def test_atoms_are_invariant_under_deletion(m, a, g):
    f = F.iff(F.Del(g, F.Atom(a)), F.Atom(a))
    for sem in (LOCAL, GLOBAL):
        assert extension(m, f, sem) == set(m.worlds)


@given(models(max_worlds=3), formulas(max_leaves=6), formulas(max_leaves=6))
def test_deletion_is_self_dual(m, g, b):
    for sem in (LOCAL, GLOBAL):
        assert extension(m, F.Del(g, b), sem) == extension(m, F.del_dual(g, b), sem)


@given(models(), formulas(with_del=False))
def test_semantics_agree_without_deletions(m, f):
    assert extension(m, f, LOCAL) == extension(m, f, GLOBAL)


def test_memo_agrees_with_plain_evaluation():
    rng = random.Random(11)
    for _ in range(1000):
        m = random_model(rng, rng.randint(1, 5), ("p", "q"))
        f = random_formula(rng, ("p", "q"), max_size=20)
        sem = rng.choice((LOCAL, GLOBAL))
        a = Checker(m, sem, memo=True).ext_mask(f)
        b = Checker(m, sem, memo=False).ext_mask(f)
        assert a == b, (m, F.to_str(f))


def test_reference_evaluator_agrees():
    rng = random.Random(5)
    for _ in range(300):
        m = random_model(rng, rng.randint(1, 4), ("p", "q"))
        f = random_formula(rng, ("p", "q"), max_size=12)
        sem = rng.choice((LOCAL, GLOBAL))
        ch = Checker(m, sem)
        for w in m.worlds:
            assert ch.holds(w, f) == reference_eval(ModelState(m), w, f, sem)


def test_small_cache_cap_gives_same_answers():
    rng = random.Random(3)
    for _ in range(100):
        m = random_model(rng, 4, ("p", "q"))
        f = random_formula(rng, ("p", "q"), max_size=16)
        assert Checker(m, cache_cap=3).ext_mask(f) == Checker(m).ext_mask(f)


def test_cache_cap_from_environment(monkeypatch):
    monkeypatch.setenv("SDML_CACHE_CAP", "17")
    assert Checker(model("intro")).cache_cap == 17


def test_strict_alphabet():
    m = model("intro")
    assert not evaluate(m, "i", F.Atom("zz"))
    with pytest.raises(UnknownAtomError):
        evaluate(m, "i", F.Atom("zz"), strict=True)


def test_evaluation_on_a_state():
    m = model("intro")
    s = ModelState(m).delete_from("i", {"v", "s"})
    assert evaluate(s, "i", parse_ld("[]false"))
    assert not evaluate(m, "i", parse_ld("[]false"))


def test_trace_records_each_deletion():
    trace = Trace()
    m = model("intro")
    assert reference_eval(ModelState(m), "i", parse_ld("[-p][][-q][]false"), trace=trace)
    first = trace.events[0]
    assert first.world == "i" and first.removed == (("i", "v"),)
    assert first.extension == {"i", "v", "g"}
    assert any(e.world == "s" and set(e.removed) == {("s", "u"), ("s", "t")}
               for e in trace.events)
    assert "[-p] at i" in trace.render()


def test_unknown_semantics():
    with pytest.raises(ValueError):
        Checker(model("intro"), "sideways")
