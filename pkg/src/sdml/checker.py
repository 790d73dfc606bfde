"""Model checking under local and global link-deletion semantics.

Two evaluators live here:

* ``Checker`` computes whole extensions (world masks) and memoizes them on
  ``(live-edge key, node id)``.  Valuation and worlds never change under
  deletion, so the live-edge masks identify a derived model completely.
* ``reference_eval`` is a direct pointwise transcription of the truth
  clauses over ``ModelState`` objects.  It has no cache and is kept as the
  independent oracle for the fast path; it can also record a deletion trace.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from . import formula as F
from .errors import UnknownAtomError
from .kripke import KripkeModel, ModelState, bits

LOCAL = "local"
GLOBAL = "global"
SEMANTICS = (LOCAL, GLOBAL)

_ATOM, _TOP, _NOT, _AND, _BOX, _DEL = range(6)


def cache_cap_from_env(default: int = 2_000_000) -> int:
    raw = os.environ.get("SDML_CACHE_CAP")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def _check_semantics(semantics: str) -> str:
    if semantics not in SEMANTICS:
        raise ValueError(f"semantics must be 'local' or 'global', not {semantics!r}")
    return semantics


class Program:
    """Hash-consed node table for a set of plain formulas.

    The table is model independent, so a sweep compiles its formulas once and
    reuses the ids with a fresh ``Checker`` per model.
    """

    def __init__(self):
        self.ops: list[int] = []
        self.arg1: list = []
        self.arg2: list = []
        self._ids: dict[tuple, int] = {}
        self._roots: dict[F.Formula, int] = {}

    def __len__(self):
        return len(self.ops)

    def add(self, f: F.Formula) -> int:
        nid = self._roots.get(f)
        if nid is None:
            nid = self._add(f)
            self._roots[f] = nid
        return nid

    def _node(self, key: tuple) -> int:
        nid = self._ids.get(key)
        if nid is None:
            nid = len(self.ops)
            self._ids[key] = nid
            self.ops.append(key[0])
            self.arg1.append(key[1] if len(key) > 1 else None)
            self.arg2.append(key[2] if len(key) > 2 else None)
        return nid

    def _add(self, f: F.Formula) -> int:
        if isinstance(f, F.Atom):
            return self._node((_ATOM, f.name))
        if isinstance(f, F.Top):
            return self._node((_TOP,))
        if isinstance(f, F.Not):
            return self._node((_NOT, self._add(f.arg)))
        if isinstance(f, F.And):
            return self._node((_AND, self._add(f.left), self._add(f.right)))
        if isinstance(f, F.Box):
            return self._node((_BOX, self._add(f.arg)))
        if isinstance(f, F.Del):
            return self._node((_DEL, self._add(f.guard), self._add(f.body)))
        raise TypeError(f"{type(f).__name__} is not part of the plain deletion language")


class Checker:
    """An evaluation session for one base model and one semantics."""

    def __init__(self, model: KripkeModel, semantics: str = LOCAL, strict: bool = False,
                 memo: bool = True, program: Program | None = None,
                 cache_cap: int | None = None):
        self.model = model
        self.semantics = _check_semantics(semantics)
        self.strict = strict
        self.memo = memo
        self.program = program or Program()
        self.cache: dict[tuple, int] = {}
        self.cache_cap = cache_cap or cache_cap_from_env()
        self._atoms: dict[str, int] = {}
        self._n = model.n
        self._full = model.full
        self._global = semantics == GLOBAL

    def rebind(self, model: KripkeModel) -> "Checker":
        """Reuse the compiled formulas for another base model."""
        self.model = model
        self.cache.clear()
        self._atoms.clear()
        self._n = model.n
        self._full = model.full
        return self

    # -- public API --------------------------------------------------------

    def _live(self, state) -> tuple[int, ...]:
        if state is None:
            return self.model.succ
        if state.base != self.model:
            raise ValueError("state belongs to a different base model")
        return state.live

    def ext_mask(self, f: F.Formula, state: ModelState | None = None) -> int:
        return self.ext(self._live(state), self.program.add(f))

    def extension(self, f: F.Formula, state: ModelState | None = None) -> frozenset[str]:
        return self.model.names(self.ext_mask(f, state))

    def holds(self, world: str, f: F.Formula, state: ModelState | None = None) -> bool:
        i = self.model.index_of(world)
        return bool(self.ext_mask(f, state) >> i & 1)

    # -- core --------------------------------------------------------------

    def _atom(self, name: str) -> int:
        mask = self._atoms.get(name)
        if mask is None:
            mask = self.model.val_mask(name, strict=self.strict)
            self._atoms[name] = mask
        return mask

    def ext(self, live: tuple[int, ...], nid: int) -> int:
        key = (live, nid)
        if self.memo:
            hit = self.cache.get(key)
            if hit is not None:
                return hit
        p = self.program
        op = p.ops[nid]
        if op == _ATOM:
            res = self._atom(p.arg1[nid])
        elif op == _TOP:
            res = self._full
        elif op == _NOT:
            res = self._full & ~self.ext(live, p.arg1[nid])
        elif op == _AND:
            res = self.ext(live, p.arg1[nid])
            if res:
                res &= self.ext(live, p.arg2[nid])
        elif op == _BOX:
            bad = ~self.ext(live, p.arg1[nid])
            res = 0
            for i, s in enumerate(live):
                if not s & bad:
                    res |= 1 << i
        elif self._global:
            g = self.ext(live, p.arg1[nid])
            res = self.ext(tuple(s & ~g for s in live), p.arg2[nid])
        else:
            g = self.ext(live, p.arg1[nid])
            body = p.arg2[nid]
            res = 0
            same = None
            for i, s in enumerate(live):
                ns = s & ~g
                if ns == s:
                    if same is None:
                        same = self.ext(live, body)
                    res |= same & (1 << i)
                elif self.ext(live[:i] + (ns,) + live[i + 1:], body) >> i & 1:
                    res |= 1 << i
        if self.memo:
            if len(self.cache) >= self.cache_cap:
                self.cache.clear()
            self.cache[key] = res
        return res


def _as_state(m) -> ModelState:
    return m if isinstance(m, ModelState) else ModelState(m)


def evaluate(m, world: str, f: F.Formula, semantics: str = LOCAL, strict: bool = False) -> bool:
    """Truth of ``f`` at ``world``; ``m`` is a ``KripkeModel`` or ``ModelState``."""
    s = _as_state(m)
    return Checker(s.base, semantics, strict).holds(world, f, s)


def extension(m, f: F.Formula, semantics: str = LOCAL, strict: bool = False) -> frozenset[str]:
    s = _as_state(m)
    return Checker(s.base, semantics, strict).extension(f, s)


# -- reference evaluator -----------------------------------------------------

@dataclass
class TraceEvent:
    depth: int
    world: str
    guard: F.Formula
    extension: frozenset[str]
    removed: tuple[tuple[str, str], ...]


@dataclass
class Trace:
    events: list[TraceEvent] = field(default_factory=list)

    def render(self) -> str:
        lines = []
        for e in self.events:
            pad = "  " * e.depth
            ext = ",".join(sorted(e.extension)) or "-"
            cut = ",".join(f"{a}->{b}" for a, b in e.removed) or "none"
            lines.append(f"{pad}[-{F.to_str(e.guard)}] at {e.world}: "
                         f"extension {{{ext}}}, removed {cut}")
        return "\n".join(lines)


def reference_eval(state: ModelState, world: str, f: F.Formula, semantics: str = LOCAL,
                   strict: bool = False, trace: Trace | None = None, _depth: int = 0) -> bool:
    """Pointwise truth by direct recursion on the clauses, without caching."""
    _check_semantics(semantics)
    m = state.base

    def ev(s, w, g, depth):
        if isinstance(g, F.Atom):
            if strict and g.name not in m.alphabet:
                raise UnknownAtomError(f"atom {g.name!r} is not in the model's alphabet")
            return w in m.valuation.get(g.name, ())
        if isinstance(g, F.Top):
            return True
        if isinstance(g, F.Not):
            return not ev(s, w, g.arg, depth)
        if isinstance(g, F.And):
            return ev(s, w, g.left, depth) and ev(s, w, g.right, depth)
        if isinstance(g, F.Box):
            return all(ev(s, v, g.arg, depth) for v in s.successors(w))
        if isinstance(g, F.Del):
            ext = frozenset(v for v in m.worlds if ev(s, v, g.guard, depth + 1))
            if semantics == LOCAL:
                s2 = s.delete_from(w, ext)
            else:
                s2 = s.delete_global(ext)
            if trace is not None:
                newly = tuple(e for e in s2.removed if e not in set(s.removed))
                trace.events.append(TraceEvent(depth, w, g.guard, ext, newly))
            return ev(s2, w, g.body, depth + 1)
        raise TypeError(f"{type(g).__name__} is not part of the plain deletion language")

    m.index_of(world)
    return ev(state, world, f, _depth)


def reference_extension(state: ModelState, f: F.Formula, semantics: str = LOCAL) -> frozenset[str]:
    return frozenset(w for w in state.base.worlds if reference_eval(state, w, f, semantics))


def successor_bits(mask: int):
    return list(bits(mask))
