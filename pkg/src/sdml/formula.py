"""Abstract syntax for the deletion language and its hybrid extension.

Six core constructors (``Atom``, ``Top``, ``Not``, ``And``, ``Box``, ``Del``)
make up the plain language.  ``Nom``, ``At`` and ``Down`` add nominal
variables, the satisfaction operator and the down-arrow binder; ``Meta`` is a
schema placeholder used only by the validity harness.

Derived connectives are plain functions that build core trees, so every
consumer of a formula deals with the same small set of node types.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple, Union


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    arg: "Formula"


@dataclass(frozen=True)
class Del:
    """``[-guard]body``: cut the links from the current world to guard-worlds."""

    guard: "Formula"
    body: "Formula"


@dataclass(frozen=True)
class Nom:
    name: str


@dataclass(frozen=True)
class At:
    nom: str
    body: "Formula"


@dataclass(frozen=True)
class Down:
    nom: str
    body: "Formula"


@dataclass(frozen=True)
class Meta:
    name: str


Formula = Union[Atom, Top, Not, And, Box, Del, Nom, At, Down, Meta]

LD_TYPES = (Atom, Top, Not, And, Box, Del)
HYBRID_TYPES = (Nom, At, Down)

TOP = Top()
BOT = Not(TOP)


# -- derived connectives -----------------------------------------------------

def bot() -> Formula:
    return BOT


def neg(a: Formula) -> Formula:
    return Not(a)


def conj(a: Formula, b: Formula) -> Formula:
    return And(a, b)


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def dia(a: Formula) -> Formula:
    return Not(Box(Not(a)))


def del_dual(guard: Formula, body: Formula) -> Formula:
    """``<-guard>body``, defined as ``~[-guard]~body``."""
    return Not(Del(guard, Not(body)))


def big_and(items) -> Formula:
    items = list(items)
    if not items:
        return TOP
    out = items[0]
    for it in items[1:]:
        out = And(out, it)
    return out


def big_or(items) -> Formula:
    items = list(items)
    if not items:
        return BOT
    out = items[0]
    for it in items[1:]:
        out = disj(out, it)
    return out


# -- traversal ---------------------------------------------------------------

def children(f: Formula) -> tuple:
    if isinstance(f, (Not, Box)):
        return (f.arg,)
    if isinstance(f, And):
        return (f.left, f.right)
    if isinstance(f, Del):
        return (f.guard, f.body)
    if isinstance(f, (At, Down)):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def atoms(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def metavars(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Meta)}


def is_ld(f: Formula) -> bool:
    return all(isinstance(g, LD_TYPES) for g in subformulas(f))


def is_del_free(f: Formula) -> bool:
    return not any(isinstance(g, Del) for g in subformulas(f))


def free_nominals(f: Formula) -> set[str]:
    if isinstance(f, Nom):
        return {f.name}
    if isinstance(f, At):
        return {f.nom} | free_nominals(f.body)
    if isinstance(f, Down):
        return free_nominals(f.body) - {f.nom}
    out: set[str] = set()
    for c in children(f):
        out |= free_nominals(c)
    return out


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace ``Meta`` placeholders; unknown placeholders are left alone."""
    if isinstance(f, Meta):
        return mapping.get(f.name, f)
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping))
    if isinstance(f, Box):
        return Box(substitute(f.arg, mapping))
    if isinstance(f, And):
        return And(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Del):
        return Del(substitute(f.guard, mapping), substitute(f.body, mapping))
    if isinstance(f, At):
        return At(f.nom, substitute(f.body, mapping))
    if isinstance(f, Down):
        return Down(f.nom, substitute(f.body, mapping))
    return f


# -- metrics -----------------------------------------------------------------

class Metrics(NamedTuple):
    size: int
    modal_depth: int
    del_depth: int


def metrics(f: Formula) -> Metrics:
    """Node count, modal depth and deletion depth.

    A guard is evaluated at the successors of the world where the deletion
    happens, so its modal depth counts one level deeper than the body's.
    """
    if isinstance(f, (Atom, Top, Nom, Meta)):
        return Metrics(1, 0, 0)
    if isinstance(f, (Not, At, Down)):
        m = metrics(f.arg if isinstance(f, Not) else f.body)
        return Metrics(m.size + 1, m.modal_depth, m.del_depth)
    if isinstance(f, Box):
        m = metrics(f.arg)
        return Metrics(m.size + 1, m.modal_depth + 1, m.del_depth)
    if isinstance(f, And):
        a, b = metrics(f.left), metrics(f.right)
        return Metrics(a.size + b.size + 1, max(a.modal_depth, b.modal_depth),
                       max(a.del_depth, b.del_depth))
    if isinstance(f, Del):
        g, b = metrics(f.guard), metrics(f.body)
        return Metrics(g.size + b.size + 1, max(g.modal_depth + 1, b.modal_depth),
                       1 + max(g.del_depth, b.del_depth))
    raise TypeError(f"not a formula: {f!r}")


def size(f: Formula) -> int:
    return metrics(f).size


# -- printing ----------------------------------------------------------------

_IMP, _OR, _AND, _UNARY = 1, 2, 3, 4


def _shape(f: Formula):
    """Classify a node by the surface form the printer will use for it."""
    if isinstance(f, Not):
        a = f.arg
        if isinstance(a, Top):
            return ("false",)
        if isinstance(a, Box) and isinstance(a.arg, Not):
            return ("dia", a.arg.arg)
        if isinstance(a, Del) and isinstance(a.body, Not):
            return ("ddel", a.guard, a.body.arg)
        if isinstance(a, And) and isinstance(a.right, Not):
            if isinstance(a.left, Not):
                return ("or", a.left.arg, a.right.arg)
            return ("imp", a.left, a.right.arg)
        return ("not", a)
    if isinstance(f, And):
        return ("and", f.left, f.right)
    return ("leaf",)


def _prec(f: Formula) -> int:
    kind = _shape(f)[0]
    return {"imp": _IMP, "or": _OR, "and": _AND}.get(kind, _UNARY)


def _wrap(f: Formula, need: int) -> str:
    s = to_str(f)
    return f"({s})" if _prec(f) < need else s


def to_str(f: Formula) -> str:
    shape = _shape(f)
    kind = shape[0]
    if kind == "false":
        return "false"
    if kind == "dia":
        return "<>" + _wrap(shape[1], _UNARY)
    if kind == "ddel":
        return f"<-{to_str(shape[1])}>" + _wrap(shape[2], _UNARY)
    if kind == "or":
        return f"{_wrap(shape[1], _OR)} | {_wrap(shape[2], _AND)}"
    if kind == "imp":
        return f"{_wrap(shape[1], _OR)} -> {_wrap(shape[2], _IMP)}"
    if kind == "not":
        return "~" + _wrap(shape[1], _UNARY)
    if kind == "and":
        return f"{_wrap(shape[1], _AND)} & {_wrap(shape[2], _UNARY)}"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Box):
        return "[]" + _wrap(f.arg, _UNARY)
    if isinstance(f, Del):
        return f"[-{to_str(f.guard)}]" + _wrap(f.body, _UNARY)
    if isinstance(f, Nom):
        return f.name
    if isinstance(f, At):
        return f"@{f.nom} " + _wrap(f.body, _UNARY)
    if isinstance(f, Down):
        return f"!{f.nom} " + _wrap(f.body, _UNARY)
    if isinstance(f, Meta):
        return f.name
    raise TypeError(f"not a formula: {f!r}")
