import pytest
from hypothesis import given, settings

from sdml import fol
from sdml import formula as F
from sdml.errors import ParseError
from sdml.parser import parse_fol, parse_hybrid, parse_ld, parse_schema

from conftest import formulas

p, q = F.Atom("p"), F.Atom("q")


def test_parse_deletion_diamond():
    assert parse_ld("[-p]<>q") == F.Del(p, F.Not(F.Box(F.Not(q))))


def test_parse_true():
    assert parse_ld("true") == F.TOP


def test_parse_nested_deletions():
    bot = F.Not(F.TOP)
    assert parse_ld("[-p][] [-q][] false") == F.Del(p, F.Box(F.Del(q, F.Box(bot))))


@pytest.mark.parametrize("f, text", [
    (F.Del(p, F.Not(F.Box(F.Not(q)))), "[-p]<>q"),
    (F.TOP, "true"),
    (F.Box(F.Not(F.TOP)), "[]false"),
])
def test_print_examples(f, text):
    assert F.to_str(f) == text


def test_dual_deletion_is_sugar():
    assert parse_ld("<-p>q") == parse_ld("~[-p]~q")


@pytest.mark.parametrize("text, expected", [
    ("p -> q", "~(p & ~q)"),
    ("p | q", "~(~p & ~q)"),
    ("<>p", "~[]~p"),
    ("false", "~true"),
])
def test_sugar_expands_to_core(text, expected):
    assert parse_ld(text) == parse_ld(expected)


def test_modalities_bind_tighter_than_connectives():
    assert parse_ld("[-p]q & r") == F.And(F.Del(p, q), F.Atom("r"))
    assert parse_ld("[]p -> q") == F.implies(F.Box(p), q)
    assert parse_ld("p -> q -> r") == F.implies(p, F.implies(q, F.Atom("r")))


def test_biconditional_expands():
    assert parse_ld("p <-> q") == F.And(F.implies(p, q), F.implies(q, p))


@pytest.mark.parametrize("text", ["", "p &", "[-p", "(p", "p q", "[]", "P", "@x p", "!x p"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_ld(text)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_ld("p & & q")
    assert err.value.pos == 4


def test_metrics_examples():
    assert F.metrics(p) == (1, 0, 0)
    assert F.metrics(F.Box(p)) == (2, 1, 0)
    m = F.metrics(parse_ld("<>[-<>p1][]p2"))
    assert m.del_depth == 1 and m.modal_depth == 3


@settings(max_examples=1000)
@given(formulas(max_leaves=15))
def test_round_trip(f):
    assert parse_ld(F.to_str(f)) == f


@given(formulas())
def test_strict_subformulas_are_smaller(f):
    for g in F.children(f):
        assert F.size(g) < F.size(f)


@given(formulas())
def test_core_only(f):
    assert F.is_ld(f)


def test_hybrid_parse_and_print():
    f = parse_hybrid("!x <>(@x p & ~x1)")
    assert f == F.Down("x", F.dia(F.And(F.At("x", p), F.Not(F.Nom("x1")))))
    assert parse_hybrid(F.to_str(f)) == f
    assert F.free_nominals(f) == {"x1"}


def test_hybrid_nominals_vs_atoms():
    assert parse_hybrid("x & xa") == F.And(F.Nom("x"), F.Atom("xa"))
    assert parse_ld("x") == F.Atom("x")


@given(formulas(max_leaves=8))
def test_ld_embeds_into_hybrid(f):
    assert parse_hybrid(F.to_str(f)) == f


def test_schema_placeholders_and_substitution():
    s = parse_schema("[-A]B <-> B")
    assert F.metavars(s) == {"A", "B"}
    inst = F.substitute(s, {"A": p, "B": q})
    assert inst == parse_ld("[-p]q <-> q")


def test_fol_parse_and_print():
    f = parse_fol("Ex y (R x y & Ax z (R y z & ~Ex z' (R z z' & P_p1 z') -> P_p2 z))")
    assert fol.free_variables(f) == {"x"}
    assert parse_fol(fol.to_str(f)) == f
    assert parse_fol("x = y") == fol.Eq("x", "y")


def test_big_connectives():
    assert F.big_and([]) == F.TOP
    assert F.big_or([]) == F.BOT
    assert F.big_and([p]) == p
    assert F.big_and([p, q]) == F.And(p, q)
