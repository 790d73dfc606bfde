"""First-order formulas over one binary relation, unary predicates and equality.

Evaluation is plain Tarskian satisfaction over a finite ``KripkeModel``.  The
evaluator hash-conses the formula into a DAG and memoizes each node on the
values of its own free variables, which keeps the large outputs of the
standard translation cheap to evaluate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import UnboundVariableError


@dataclass(frozen=True)
class Pred:
    pred: str
    var: str


@dataclass(frozen=True)
class Rel:
    v1: str
    v2: str


@dataclass(frozen=True)
class Eq:
    v1: str
    v2: str


@dataclass(frozen=True)
class Not:
    arg: "FolFormula"


@dataclass(frozen=True)
class And:
    left: "FolFormula"
    right: "FolFormula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "FolFormula"


FolFormula = Union[Pred, Rel, Eq, Not, And, Exists]


def disj(a, b):
    return Not(And(Not(a), Not(b)))


def implies(a, b):
    return Not(And(a, Not(b)))


def forall(v, body):
    return Not(Exists(v, Not(body)))


def big_and(items):
    items = list(items)
    out = items[0]
    for it in items[1:]:
        out = And(out, it)
    return out


def free_variables(f: FolFormula) -> set[str]:
    if isinstance(f, Pred):
        return {f.var}
    if isinstance(f, (Rel, Eq)):
        return {f.v1, f.v2}
    if isinstance(f, Not):
        return free_variables(f.arg)
    if isinstance(f, And):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, Exists):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a first-order formula: {f!r}")


def size(f: FolFormula) -> int:
    stack, n = [f], 0
    while stack:
        g = stack.pop()
        n += 1
        if isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, And):
            stack += [g.left, g.right]
        elif isinstance(g, Exists):
            stack.append(g.body)
    return n


def quantifier_depth(f: FolFormula) -> int:
    if isinstance(f, Not):
        return quantifier_depth(f.arg)
    if isinstance(f, And):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    if isinstance(f, Exists):
        return 1 + quantifier_depth(f.body)
    return 0


# -- printing ----------------------------------------------------------------

def _shape(f):
    if isinstance(f, Not):
        a = f.arg
        if isinstance(a, Exists) and isinstance(a.body, Not):
            return ("all", a.var, a.body.arg)
        if isinstance(a, And) and isinstance(a.right, Not):
            if isinstance(a.left, Not):
                return ("or", a.left.arg, a.right.arg)
            return ("imp", a.left, a.right.arg)
        return ("not", a)
    if isinstance(f, And):
        return ("and", f.left, f.right)
    return ("leaf",)


def _prec(f) -> int:
    return {"imp": 1, "or": 2, "and": 3}.get(_shape(f)[0], 4)


def _wrap(f, need: int) -> str:
    s = to_str(f)
    return f"({s})" if _prec(f) < need else s


def to_str(f: FolFormula) -> str:
    shape = _shape(f)
    kind = shape[0]
    if kind == "all":
        return f"Ax {shape[1]} {_wrap(shape[2], 4)}"
    if kind == "or":
        return f"{_wrap(shape[1], 2)} | {_wrap(shape[2], 3)}"
    if kind == "imp":
        return f"{_wrap(shape[1], 2)} -> {_wrap(shape[2], 1)}"
    if kind == "not":
        return "~" + _wrap(shape[1], 4)
    if kind == "and":
        return f"{_wrap(shape[1], 3)} & {_wrap(shape[2], 4)}"
    if isinstance(f, Pred):
        return f"P_{f.pred} {f.var}"
    if isinstance(f, Rel):
        return f"R {f.v1} {f.v2}"
    if isinstance(f, Eq):
        return f"{f.v1} = {f.v2}"
    if isinstance(f, Exists):
        return f"Ex {f.var} {_wrap(f.body, 4)}"
    raise TypeError(f"not a first-order formula: {f!r}")


# -- evaluation --------------------------------------------------------------

_PRED, _REL, _EQ, _NOT, _AND, _EX = range(6)


class FolEvaluator:
    """Memoizing evaluator for one formula over one model."""

    def __init__(self, model, formula: FolFormula, strict: bool = False):
        self.model = model
        self.strict = strict
        self.nodes: list[tuple] = []
        self.fv: list[tuple[str, ...]] = []
        self._ids: dict[tuple, int] = {}
        self.root = self._intern(formula)
        self.memo: dict[tuple, bool] = {}

    def _intern(self, f) -> int:
        # iterative post-order so deep translations do not hit the recursion limit
        done: dict[int, int] = {}
        stack = [(f, False)]
        while stack:
            g, expanded = stack.pop()
            if id(g) in done:
                continue
            if isinstance(g, Not):
                kids = (g.arg,)
            elif isinstance(g, And):
                kids = (g.left, g.right)
            elif isinstance(g, Exists):
                kids = (g.body,)
            else:
                kids = ()
            if kids and not expanded:
                stack.append((g, True))
                stack.extend((k, False) for k in kids)
                continue
            ids = tuple(done[id(k)] for k in kids)
            if isinstance(g, Pred):
                key = (_PRED, g.pred, g.var)
                fv = (g.var,)
            elif isinstance(g, Rel):
                key = (_REL, g.v1, g.v2)
                fv = tuple(sorted({g.v1, g.v2}))
            elif isinstance(g, Eq):
                key = (_EQ, g.v1, g.v2)
                fv = tuple(sorted({g.v1, g.v2}))
            elif isinstance(g, Not):
                key = (_NOT, ids[0])
                fv = self.fv[ids[0]]
            elif isinstance(g, And):
                key = (_AND, ids[0], ids[1])
                fv = tuple(sorted(set(self.fv[ids[0]]) | set(self.fv[ids[1]])))
            elif isinstance(g, Exists):
                key = (_EX, g.var, ids[0])
                fv = tuple(v for v in self.fv[ids[0]] if v != g.var)
            else:
                raise TypeError(f"not a first-order formula: {g!r}")
            nid = self._ids.get(key)
            if nid is None:
                nid = len(self.nodes)
                self._ids[key] = nid
                self.nodes.append(key)
                self.fv.append(fv)
            done[id(g)] = nid
        return done[id(f)]

    def holds(self, assignment: Mapping[str, str]) -> bool:
        m = self.model
        env = {}
        for v in self.fv[self.root]:
            if v not in assignment:
                raise UnboundVariableError(f"variable {v!r} is unassigned")
            env[v] = m.index_of(assignment[v])
        return self._eval(self.root, env)

    def _eval(self, nid: int, env: dict) -> bool:
        key = (nid, tuple(env[v] for v in self.fv[nid]))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        node = self.nodes[nid]
        op = node[0]
        m = self.model
        if op == _PRED:
            mask = m.val_mask(node[1], strict=self.strict)
            res = bool(mask >> env[node[2]] & 1)
        elif op == _REL:
            res = bool(m.succ[env[node[1]]] >> env[node[2]] & 1)
        elif op == _EQ:
            res = env[node[1]] == env[node[2]]
        elif op == _NOT:
            res = not self._eval(node[1], env)
        elif op == _AND:
            res = self._eval(node[1], env) and self._eval(node[2], env)
        else:
            v, body = node[1], node[2]
            saved = env.get(v, None)
            res = False
            for d in range(m.n):
                env[v] = d
                if self._eval(body, env):
                    res = True
                    break
            if saved is None:
                env.pop(v, None)
            else:
                env[v] = saved
        self.memo[key] = res
        return res


def eval_fol(model, assignment: Mapping[str, str], formula: FolFormula,
             strict: bool = False) -> bool:
    """Classical satisfaction of ``formula`` in ``model`` under ``assignment``.

    ``assignment`` maps variable names to world ids and must cover every free
    variable.  Unknown predicates denote the empty set unless ``strict``.
    """
    return FolEvaluator(model, formula, strict=strict).holds(assignment)
