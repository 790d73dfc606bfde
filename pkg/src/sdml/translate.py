"""Syntax-directed translations of the deletion language.

Both translations thread an index sequence: a tuple of ``(variable, guard)``
pairs, one per deletion passed on the way down.  A successor step checks the
edge it uses against every recorded deletion, evaluating each guard under the
prefix of the sequence that was in force when that deletion happened.

``reduce_global`` removes deletions under the global semantics using the box
recursion law, which is sound only there.
"""
from __future__ import annotations

import itertools
from typing import NamedTuple

from . import fol as L
from . import formula as F

ROOT = "x"


class IndexEntry(NamedTuple):
    var: str
    guard: F.Formula


IndexSequence = tuple  # tuple[IndexEntry, ...]

SEED: IndexSequence = (IndexEntry(ROOT, F.BOT),)


class _Fresh:
    """Monotone name supply: x0, x1, ... never reused within one call."""

    def __init__(self, prefix: str = "x"):
        self._count = itertools.count()
        self.prefix = prefix

    def __call__(self) -> str:
        return f"{self.prefix}{next(self._count)}"


# -- first-order -------------------------------------------------------------

def standard_translate(f: F.Formula, seq: IndexSequence = SEED, var: str = ROOT) -> L.FolFormula:
    """First-order translation of ``f`` with ``var`` free.

    With the default seed the result has exactly ``x`` free and holds at an
    assignment ``x -> w`` iff ``f`` holds at ``w`` (local semantics).
    """
    if not seq:
        raise ValueError("index sequence must be non-empty")
    fresh = _Fresh()
    root = seq[0].var

    def st(g, x, o):
        if isinstance(g, F.Atom):
            return L.Pred(g.name, x)
        if isinstance(g, F.Top):
            return L.Eq(x, x)
        if isinstance(g, F.Not):
            return L.Not(st(g.arg, x, o))
        if isinstance(g, F.And):
            return L.And(st(g.left, x, o), st(g.right, x, o))
        if isinstance(g, F.Box):
            return L.Not(successor(F.Not(g.arg), x, o))
        if isinstance(g, F.Del):
            return st(g.body, x, o + (IndexEntry(x, g.guard),))
        raise TypeError(f"{type(g).__name__} is not part of the plain deletion language")

    def successor(g, x, o):
        y = fresh()
        parts = [L.Rel(x, y),
                 L.Not(L.And(L.Eq(x, o[0].var), st(o[0].guard, y, (IndexEntry(root, F.BOT),))))]
        for i in range(len(o) - 1):
            v, guard = o[i + 1]
            parts.append(L.Not(L.And(L.Eq(x, v), st(guard, y, o[:i + 1]))))
        parts.append(st(g, y, o))
        return L.Exists(y, L.big_and(parts))

    return st(f, var, tuple(seq))


# -- hybrid ------------------------------------------------------------------

def hybrid_translate(f: F.Formula, seq: IndexSequence = SEED) -> F.Formula:
    """Deletion-free hybrid formula equivalent to ``f`` at every world.

    The seed's nominal only occurs in a conjunct that is trivially true, so
    when it shows up free the result is closed off with ``!x`` to keep it a
    sentence.
    """
    if not seq:
        raise ValueError("index sequence must be non-empty")
    fresh = _Fresh()
    root = seq[0].var

    def tr(g, o):
        if isinstance(g, (F.Atom, F.Top)):
            return g
        if isinstance(g, F.Not):
            return F.Not(tr(g.arg, o))
        if isinstance(g, F.And):
            return F.And(tr(g.left, o), tr(g.right, o))
        if isinstance(g, F.Box):
            return F.Not(successor(F.Not(g.arg), o))
        if isinstance(g, F.Del):
            x = fresh()
            return F.Down(x, tr(g.body, o + (IndexEntry(x, g.guard),)))
        raise TypeError(f"{type(g).__name__} is not part of the plain deletion language")

    def successor(g, o):
        x = fresh()
        parts = [F.Not(F.And(F.At(x, F.Nom(o[0].var)),
                             tr(o[0].guard, (IndexEntry(root, F.BOT),))))]
        for i in range(len(o) - 1):
            v, guard = o[i + 1]
            parts.append(F.Not(F.And(F.At(x, F.Nom(v)), tr(guard, o[:i + 1]))))
        parts.append(tr(g, o))
        return F.Down(x, F.dia(F.big_and(parts)))

    out = tr(f, tuple(seq))
    if root in F.free_nominals(out):
        out = F.Down(root, out)
    return out


def count_successors(n: int) -> F.Formula:
    """Hybrid formula true exactly at worlds with ``n`` distinct successors."""
    if n < 1:
        raise ValueError("n must be positive")
    names = [f"x{i}" for i in range(1, n + 1)]
    inner = F.big_and(
        [F.big_or([F.Nom(v) for v in names])]
        + [F.Not(F.At(a, F.Nom(b))) for a, b in itertools.combinations(names, 2)])
    body = F.At(ROOT, F.Box(inner))
    for v in reversed(names[1:]):
        body = F.At(ROOT, F.dia(F.Down(v, body)))
    return F.Down(ROOT, F.dia(F.Down(names[0], body)))


# -- global reduction --------------------------------------------------------

def _push(guard: F.Formula, body: F.Formula) -> F.Formula:
    # body is deletion free; guard is deletion free
    if isinstance(body, (F.Atom, F.Top)):
        return body
    if isinstance(body, F.Not):
        return F.Not(_push(guard, body.arg))
    if isinstance(body, F.And):
        return F.And(_push(guard, body.left), _push(guard, body.right))
    if isinstance(body, F.Box):
        return F.Box(F.implies(F.Not(guard), _push(guard, body.arg)))
    raise TypeError(f"unexpected {type(body).__name__} during reduction")


def reduce_global(f: F.Formula) -> F.Formula:
    """Deletion-free equivalent of ``f`` under the global semantics.

    Works innermost first: guard and body are reduced before the outer
    deletion is pushed through the body's Boolean and box structure.
    """
    if isinstance(f, (F.Atom, F.Top)):
        return f
    if isinstance(f, F.Not):
        return F.Not(reduce_global(f.arg))
    if isinstance(f, F.And):
        return F.And(reduce_global(f.left), reduce_global(f.right))
    if isinstance(f, F.Box):
        return F.Box(reduce_global(f.arg))
    if isinstance(f, F.Del):
        return _push(reduce_global(f.guard), reduce_global(f.body))
    raise TypeError(f"{type(f).__name__} is not part of the plain deletion language")


# -- display simplifiers -----------------------------------------------------

def _fold_fol(f):
    """Returns True/False for constants, otherwise a formula."""
    if isinstance(f, L.Eq):
        return True if f.v1 == f.v2 else f
    if isinstance(f, (L.Pred, L.Rel)):
        return f
    if isinstance(f, L.Not):
        a = _fold_fol(f.arg)
        if isinstance(a, bool):
            return not a
        if isinstance(a, L.Not):
            return a.arg
        return L.Not(a)
    if isinstance(f, L.And):
        a, b = _fold_fol(f.left), _fold_fol(f.right)
        if a is False or b is False:
            return False
        if a is True:
            return b
        if b is True:
            return a
        return L.And(a, b)
    if isinstance(f, L.Exists):
        body = _fold_fol(f.body)
        if isinstance(body, bool):
            return body  # domains are non-empty
        return L.Exists(f.var, body)
    raise TypeError(f"not a first-order formula: {f!r}")


def simplify_fol(f: L.FolFormula, var: str = ROOT) -> L.FolFormula:
    """Constant folding for display; never used by the correctness checks."""
    out = _fold_fol(f)
    if out is True:
        return L.Eq(var, var)
    if out is False:
        return L.Not(L.Eq(var, var))
    return out


def _fold_hybrid(f):
    if isinstance(f, F.Top):
        return True
    if isinstance(f, (F.Atom, F.Nom)):
        return f
    if isinstance(f, F.Not):
        a = _fold_hybrid(f.arg)
        if isinstance(a, bool):
            return not a
        if isinstance(a, F.Not):
            return a.arg
        return F.Not(a)
    if isinstance(f, F.And):
        a, b = _fold_hybrid(f.left), _fold_hybrid(f.right)
        if a is False or b is False:
            return False
        if a is True:
            return b
        if b is True:
            return a
        return F.And(a, b)
    if isinstance(f, F.Box):
        a = _fold_hybrid(f.arg)
        if a is True:
            return True
        return F.Box(F.BOT if a is False else a)
    if isinstance(f, F.At):
        if isinstance(f.body, F.Nom) and f.body.name == f.nom:
            return True
        a = _fold_hybrid(f.body)
        return a if isinstance(a, bool) else F.At(f.nom, a)
    if isinstance(f, F.Down):
        a = _fold_hybrid(f.body)
        if isinstance(a, bool):
            return a
        if f.nom not in F.free_nominals(a):
            return a
        return F.Down(f.nom, a)
    if isinstance(f, F.Del):
        g, b = _fold_hybrid(f.guard), _fold_hybrid(f.body)
        if isinstance(b, bool):
            return b
        g = F.TOP if g is True else F.BOT if g is False else g
        return F.Del(g, b)
    raise TypeError(f"not a formula: {f!r}")


def simplify_hybrid(f: F.Formula) -> F.Formula:
    out = _fold_hybrid(f)
    if out is True:
        return F.TOP
    if out is False:
        return F.BOT
    return out
