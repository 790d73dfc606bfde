import pytest
from hypothesis import given, settings

from sdml import fol as L
from sdml import formula as F
from sdml.checker import GLOBAL, Checker, extension
from sdml.fixtures import model, named
from sdml.fol import eval_fol, free_variables
from sdml.hybrid import HybridChecker, eval_hybrid
from sdml.kripke import canonical_worlds, enumerate_models, model_from_index, orbit_representatives
from sdml.lab import verify_reduce_global, verify_translation, verify_translation_example
from sdml.parser import parse_fol, parse_hybrid, parse_ld
from sdml.translate import (count_successors, hybrid_translate, reduce_global, simplify_fol,
                            simplify_hybrid, standard_translate)

from conftest import formulas


def test_atom_translates_to_predicate():
    assert standard_translate(F.Atom("p")) == L.Pred("p", "x")


def test_top_translates_to_identity():
    assert standard_translate(F.TOP) == L.Eq("x", "x")


@settings(max_examples=200)
@given(formulas(max_leaves=10))
def test_single_free_variable(f):
    assert free_variables(standard_translate(f)) == {"x"}


@settings(max_examples=200)
@given(formulas(max_leaves=10))
def test_hybrid_output_is_closed_and_deletion_free(f):
    t = hybrid_translate(f)
    assert F.is_del_free(t)
    assert not F.free_nominals(t)


def test_hybrid_atom_and_deletion_of_atom():
    assert hybrid_translate(F.Atom("p")) == F.Atom("p")
    assert F.to_str(hybrid_translate(parse_ld("[-p]q"))) == "!x0 q"


def test_diamond_translation_agrees_up_to_four_worlds():
    f = parse_ld("<>p")
    t = hybrid_translate(f)
    hc = HybridChecker(model("intro"))
    for n in range(1, 5):
        worlds = canonical_worlds(n)
        # both sides are invariant under isomorphism, so one model per class suffices
        for k in orbit_representatives(n, ("p",)):
            m = model_from_index(n, ("p",), k, worlds)
            assert hc.rebind(m).ext_mask(t) == Checker(m).ext_mask(f)


def test_fol_evaluation_examples():
    m = model("intro")
    assert eval_fol(m, {"x": "i", "y": "s"}, L.Rel("x", "y"))
    assert eval_fol(m, {"x": "g"}, L.Eq("x", "x"))
    assert eval_fol(m, {"x": "v"}, standard_translate(parse_ld("[-p]<>q")))


def test_fol_unbound_variable():
    from sdml.errors import UnboundVariableError
    with pytest.raises(UnboundVariableError):
        eval_fol(model("intro"), {}, L.Rel("x", "y"))


@pytest.mark.parametrize("target", ["fol", "hybrid"])
def test_translations_agree_with_direct_evaluation(target):
    r = verify_translation(target, count=150, seed=3)
    assert r.held, r.counterexample


def test_translation_of_order_sensitive_example():
    assert verify_translation_example(max_worlds=2, sample_size=2000, seed=1).held


def test_simplified_translation_keeps_meaning():
    f = parse_ld("<>[-<>p1][]p2")
    raw = standard_translate(f)
    simple = simplify_fol(raw)
    assert L.size(simple) < L.size(raw)
    for n in (1, 2):
        for m in enumerate_models(n, ("p1", "p2")):
            for w in m.worlds:
                assert eval_fol(m, {"x": w}, raw) == eval_fol(m, {"x": w}, simple)


def test_hybrid_simplifier_keeps_meaning():
    f = parse_ld("[-p]<>[-q]<>p")
    raw = hybrid_translate(f)
    simple = simplify_hybrid(raw)
    for n in (1, 2):
        for m in enumerate_models(n, ("p", "q")):
            for w in m.worlds:
                assert eval_hybrid(m, w, raw) == eval_hybrid(m, w, simple)


def test_counting_successors():
    two = count_successors(2)
    assert eval_hybrid(model("two_successors"), "w", two)
    assert not eval_hybrid(model("one_successor"), "v", two)


def test_counting_successors_exactly():
    for n in range(1, 4):
        for m in enumerate_models(n):
            for w in m.worlds:
                k = len(m.successors(w))
                for j in (1, 2, 3):
                    assert eval_hybrid(m, w, count_successors(j)) == (k == j)


def test_binder_consumed_immediately():
    f = parse_hybrid("!x @x p <-> p")
    for m in enumerate_models(2, ("p",)):
        for w in m.worlds:
            assert eval_hybrid(m, w, f)


def test_reduce_global_examples():
    assert reduce_global(parse_ld("[-p][]q")) == parse_ld("[](~p -> q)")
    assert reduce_global(parse_ld("[-p]q")) == parse_ld("q")


def test_reduce_global_nested_boxes():
    f = parse_ld("[-p][][-q][]r")
    out = reduce_global(f)
    assert F.is_del_free(out)
    atoms = ("p", "q", "r")
    for n in (1, 2, 3):
        for k in orbit_representatives(n, atoms):
            m = model_from_index(n, atoms, k)
            assert extension(m, f, GLOBAL) == extension(m, out, GLOBAL)


def test_dropping_the_outer_guard_below_a_box_is_wrong():
    f = parse_ld("[-p][][-q][]r")
    wrong = parse_ld("[](~p -> [](~q -> r))")
    assert any(extension(m, f, GLOBAL) != extension(m, wrong, GLOBAL)
               for n in (2, 3) for m in enumerate_models(n, ("p", "q", "r")))


@given(formulas(max_leaves=8))
def test_reduce_global_is_deletion_free(f):
    assert F.is_del_free(reduce_global(f))


def test_reduce_global_pool_small_bound():
    r = verify_reduce_global(max_worlds=2)
    assert r.held and r.models_checked == 2 * 2 ** 3 + 2 ** 4 * 2 ** 6


def test_fol_parser_reads_bundled_formula():
    simple = named("translation_example.fol")["SIMPLIFIED"]
    assert free_variables(simple) == {"x"}
    assert parse_fol(L.to_str(simple)) == simple
