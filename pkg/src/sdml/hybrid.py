"""Evaluation of hybrid formulas that may also contain deletions.

The evaluator follows the same extension-based scheme as ``checker.Checker``
but also carries an assignment of nominal variables to world indices.  A
node's value only depends on the assignment restricted to its free nominals,
which is what the cache key records.
"""
from __future__ import annotations

from typing import Mapping

from . import formula as F
from .checker import GLOBAL, LOCAL, _check_semantics, cache_cap_from_env
from .errors import UnboundVariableError
from .kripke import KripkeModel, ModelState

_ATOM, _TOP, _NOT, _AND, _BOX, _DEL, _NOM, _AT, _DOWN = range(9)


class HybridChecker:
    def __init__(self, model: KripkeModel, semantics: str = LOCAL, strict: bool = False,
                 cache_cap: int | None = None):
        self.model = model
        self.semantics = _check_semantics(semantics)
        self.strict = strict
        self.ops: list[int] = []
        self.args: list[tuple] = []
        self.fv: list[tuple[str, ...]] = []
        self._ids: dict[tuple, int] = {}
        self._roots: dict[F.Formula, int] = {}
        self.cache: dict[tuple, int] = {}
        self.cache_cap = cache_cap or cache_cap_from_env()

    def rebind(self, model: KripkeModel) -> "HybridChecker":
        """Reuse the compiled formulas for another base model."""
        self.model = model
        self.cache.clear()
        return self

    def _node(self, key: tuple, fv) -> int:
        nid = self._ids.get(key)
        if nid is None:
            nid = len(self.ops)
            self._ids[key] = nid
            self.ops.append(key[0])
            self.args.append(key[1:])
            self.fv.append(tuple(sorted(fv)))
        return nid

    def add(self, f: F.Formula) -> int:
        nid = self._roots.get(f)
        if nid is None:
            nid = self._add(f)
            self._roots[f] = nid
        return nid

    def _add(self, f) -> int:
        if isinstance(f, F.Atom):
            return self._node((_ATOM, f.name), ())
        if isinstance(f, F.Top):
            return self._node((_TOP,), ())
        if isinstance(f, F.Nom):
            return self._node((_NOM, f.name), (f.name,))
        if isinstance(f, (F.Not, F.Box)):
            a = self._add(f.arg)
            return self._node((_NOT if isinstance(f, F.Not) else _BOX, a), self.fv[a])
        if isinstance(f, (F.And, F.Del)):
            l, r = (f.left, f.right) if isinstance(f, F.And) else (f.guard, f.body)
            a, b = self._add(l), self._add(r)
            op = _AND if isinstance(f, F.And) else _DEL
            return self._node((op, a, b), set(self.fv[a]) | set(self.fv[b]))
        if isinstance(f, F.At):
            a = self._add(f.body)
            return self._node((_AT, f.nom, a), set(self.fv[a]) | {f.nom})
        if isinstance(f, F.Down):
            a = self._add(f.body)
            return self._node((_DOWN, f.nom, a), set(self.fv[a]) - {f.nom})
        raise TypeError(f"cannot evaluate {type(f).__name__}")

    # -- public API --------------------------------------------------------

    def ext_mask(self, f: F.Formula, assignment: Mapping[str, str] | None = None,
                 state: ModelState | None = None) -> int:
        nid = self.add(f)
        env = {}
        assignment = assignment or {}
        for v in self.fv[nid]:
            if v not in assignment:
                raise UnboundVariableError(f"nominal {v!r} is unassigned")
            env[v] = self.model.index_of(assignment[v])
        live = self.model.succ if state is None else state.live
        return self.ext(live, nid, env)

    def holds(self, world: str, f: F.Formula, assignment: Mapping[str, str] | None = None,
              state: ModelState | None = None) -> bool:
        i = self.model.index_of(world)
        return bool(self.ext_mask(f, assignment, state) >> i & 1)

    # -- core --------------------------------------------------------------

    def ext(self, live: tuple[int, ...], nid: int, env: dict) -> int:
        fv = self.fv[nid]
        if not fv:
            key = (live, nid)
        elif len(fv) == 1:
            key = (live, nid, env[fv[0]])
        else:
            key = (live, nid) + tuple([env[v] for v in fv])
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        op = self.ops[nid]
        a = self.args[nid]
        full = self.model.full
        if op == _ATOM:
            res = self.model.val_mask(a[0], strict=self.strict)
        elif op == _TOP:
            res = full
        elif op == _NOM:
            res = 1 << env[a[0]]
        elif op == _NOT:
            res = full & ~self.ext(live, a[0], env)
        elif op == _AND:
            res = self.ext(live, a[0], env)
            if res:
                res &= self.ext(live, a[1], env)
        elif op == _BOX:
            bad = ~self.ext(live, a[0], env)
            res = 0
            for i, s in enumerate(live):
                if not s & bad:
                    res |= 1 << i
        elif op == _AT:
            res = full if self.ext(live, a[1], env) >> env[a[0]] & 1 else 0
        elif op == _DOWN:
            v, body = a
            saved = env.get(v)
            res = 0
            for i in range(self.model.n):
                env[v] = i
                if self.ext(live, body, env) >> i & 1:
                    res |= 1 << i
            if saved is None:
                del env[v]
            else:
                env[v] = saved
        elif self.semantics == GLOBAL:
            g = self.ext(live, a[0], env)
            res = self.ext(tuple(s & ~g for s in live), a[1], env)
        else:
            g = self.ext(live, a[0], env)
            res = 0
            for i, s in enumerate(live):
                ns = s & ~g
                nl = live if ns == s else live[:i] + (ns,) + live[i + 1:]
                if self.ext(nl, a[1], env) >> i & 1:
                    res |= 1 << i
        if len(self.cache) >= self.cache_cap:
            self.cache.clear()
        self.cache[key] = res
        return res


def eval_hybrid(m, world: str, f: F.Formula, assignment: Mapping[str, str] | None = None,
                semantics: str = LOCAL, strict: bool = False) -> bool:
    """Truth of a hybrid (possibly deletion-containing) formula at ``world``.

    ``m`` is a ``KripkeModel`` or a ``ModelState``; ``assignment`` must cover
    the free nominals of ``f``.
    """
    state = m if isinstance(m, ModelState) else ModelState(m)
    return HybridChecker(state.base, semantics, strict).holds(world, f, assignment, state)
