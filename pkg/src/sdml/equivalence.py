"""Relating pointed models: bisimulation, bounded formula equivalence, set game.

``bounded_ld_equiv`` enumerates formulas by size.  Each formula is identified
with its signature: the truth table over every (edge subset, world) pair of
both generated submodels.  Truth of a compound formula in any state is a
function of its parts' truth in states of the same lattice, so formulas with
equal signatures are interchangeable in every context and only one
representative per signature is kept.

``set_dbisim`` replaces the formula-indexed deletion clauses by moves that
pick successor subsets, paired up when they are closed under the candidate
relation.  It is an approximation; disagreements with the formula oracle are
reported, not hidden.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import formula as F
from .checker import GLOBAL, LOCAL, Checker
from .errors import ResourceCapError
from .kripke import KripkeModel, PointedModel, bits, generated_submodel

EQUIVALENT = "equivalent-up-to-bound"
DISTINGUISHED = "distinguished"
SET_BISIMILAR = "set-bisimilar"
NOT_SET_BISIMILAR = "not-set-bisimilar"

MAX_EDGES = 16
DEFAULT_CANDIDATE_CAP = 5_000_000
DEFAULT_CONFIG_CAP = 200_000


@dataclass(frozen=True)
class EquivConfig:
    left_live: tuple[int, ...]
    w: int
    right_live: tuple[int, ...]
    v: int


@dataclass
class EquivVerdict:
    outcome: str
    witness: F.Formula | None = None
    witness_holds_left: bool | None = None
    relation: frozenset | None = None
    failing: EquivConfig | None = None
    stats: dict = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.outcome in (EQUIVALENT, SET_BISIMILAR)


# -- standard bisimulation ---------------------------------------------------

def standard_bisim(pm1: PointedModel, pm2: PointedModel) -> tuple[bool, frozenset]:
    """Largest bisimulation by partition refinement on the disjoint union.

    Returns whether the points are related plus the relation as pairs of
    world ids (left, right).
    """
    m1, m2 = pm1.model, pm2.model
    atoms = sorted(set(m1.alphabet) | set(m2.alphabet))
    nodes = [(0, i) for i in range(m1.n)] + [(1, i) for i in range(m2.n)]
    models = (m1, m2)

    def label(node):
        m = models[node[0]]
        return tuple(bool(m.val_mask(a) >> node[1] & 1) for a in atoms)

    block = {nd: label(nd) for nd in nodes}
    while True:
        sig = {}
        for nd in nodes:
            m = models[nd[0]]
            succ = frozenset(block[(nd[0], j)] for j in bits(m.succ[nd[1]]))
            sig[nd] = (block[nd], succ)
        ids = {s: k for k, s in enumerate(sorted(set(sig.values()), key=repr))}
        new = {nd: ids[sig[nd]] for nd in nodes}
        if len(set(new.values())) == len(set(block.values())):
            block = new
            break
        block = new
    rel = frozenset((m1.worlds[i], m2.worlds[j]) for i in range(m1.n) for j in range(m2.n)
                    if block[(0, i)] == block[(1, j)])
    return (pm1.point, pm2.point) in rel, rel


# -- signature engine --------------------------------------------------------

class DeletionSpace:
    """All edge subsets of a pointed model's generated submodel."""

    def __init__(self, pm: PointedModel, semantics: str = LOCAL):
        m = generated_submodel(pm.model, pm.point)
        self.model = m
        self.point = m.index_of(pm.point)
        self.semantics = semantics
        edges = [(i, j) for i, s in enumerate(m.succ) for j in bits(s)]
        if len(edges) > MAX_EDGES:
            raise ResourceCapError(f"{len(edges)} edges exceed the deletion-space cap {MAX_EDGES}")
        self.edges = edges
        n, E = m.n, len(edges)
        S = 1 << E
        self.full_state = S - 1
        idx = np.arange(S, dtype=np.int64)
        self.idx = idx
        adj = np.zeros((S, n, n), dtype=bool)
        for e, (i, j) in enumerate(edges):
            adj[:, i, j] = (idx >> e) & 1 == 1
        self.adj = adj
        src_w = np.zeros((n, n), dtype=np.int64)   # [dst, src] -> bits of edges src->dst
        dst_w = np.zeros(n, dtype=np.int64)        # [dst] -> bits of edges into dst
        for e, (i, j) in enumerate(edges):
            src_w[j, i] |= 1 << e
            dst_w[j] |= 1 << e
        self.src_w = src_w
        self.dst_w = dst_w
        self.shape = (S, n)

    def atom(self, name: str) -> np.ndarray:
        mask = self.model.val_mask(name)
        row = np.array([bool(mask >> i & 1) for i in range(self.model.n)])
        return np.broadcast_to(row, self.shape).copy()

    def top(self) -> np.ndarray:
        return np.ones(self.shape, dtype=bool)

    def box(self, a: np.ndarray) -> np.ndarray:
        return np.all(~self.adj | a[:, None, :], axis=2)

    def delete(self, g: np.ndarray, b: np.ndarray) -> np.ndarray:
        gi = g.astype(np.int64)
        if self.semantics == GLOBAL:
            remove = gi @ self.dst_w
            new = self.idx & ~remove
            return b[new, :]
        remove = gi @ self.src_w                   # [state, src]
        new = self.idx[:, None] & ~remove
        cols = np.arange(self.model.n)[None, :]
        return b[new, cols]

    def at_point(self, a: np.ndarray) -> bool:
        return bool(a[self.full_state, self.point])


@dataclass
class _Cls:
    formula: F.Formula
    sig: tuple
    dd: int


def bounded_ld_equiv(pm1: PointedModel, pm2: PointedModel, atoms=(), max_size: int = 8,
                     max_del_depth: int | None = None, semantics: str = LOCAL,
                     candidate_cap: int = DEFAULT_CANDIDATE_CAP) -> EquivVerdict:
    """Search for a distinguishing formula of size at most ``max_size``.

    The first witness in (size, printed form) order is returned, already
    re-checked with the model checker on both sides.
    """
    spaces = (DeletionSpace(pm1, semantics), DeletionSpace(pm2, semantics))
    dmax = max_size if max_del_depth is None else max_del_depth
    seen: set[bytes] = set()
    levels: list[list[_Cls]] = [[]]
    examined = 0

    def key(sig):
        return sig[0].tobytes() + sig[1].tobytes()

    for size in range(1, max_size + 1):
        found: dict[bytes, tuple[str, _Cls]] = {}

        def offer(f, sig, dd):
            nonlocal examined
            examined += 1
            if examined > candidate_cap:
                raise ResourceCapError(f"more than {candidate_cap} candidate formulas")
            k = key(sig) + bytes([dd])
            if k in seen:
                return
            cur = found.get(k)
            if cur is None:
                found[k] = (None, _Cls(f, sig, dd))
                return
            p_cur = cur[0] if cur[0] is not None else F.to_str(cur[1].formula)
            p_new = F.to_str(f)
            if p_new < p_cur:
                found[k] = (p_new, _Cls(f, sig, dd))
            else:
                found[k] = (p_cur, cur[1])

        if size == 1:
            offer(F.TOP, tuple(s.top() for s in spaces), 0)
            for a in atoms:
                offer(F.Atom(a), tuple(s.atom(a) for s in spaces), 0)
        else:
            for c in levels[size - 1]:
                offer(F.Not(c.formula), (~c.sig[0], ~c.sig[1]), c.dd)
                offer(F.Box(c.formula), tuple(s.box(x) for s, x in zip(spaces, c.sig)), c.dd)
            for k in range(1, size - 1):
                for a in levels[k]:
                    for b in levels[size - 1 - k]:
                        offer(F.And(a.formula, b.formula),
                              (a.sig[0] & b.sig[0], a.sig[1] & b.sig[1]), max(a.dd, b.dd))
                        dd = 1 + max(a.dd, b.dd)
                        if dd <= dmax:
                            offer(F.Del(a.formula, b.formula),
                                  tuple(s.delete(x, y) for s, x, y in zip(spaces, a.sig, b.sig)),
                                  dd)
        ordered = sorted(found.items(), key=lambda kv: kv[1][0] or F.to_str(kv[1][1].formula))
        level = []
        for k, (_, cls) in ordered:
            seen.add(k)
            level.append(cls)
        levels.append(level)
        for cls in level:
            left, right = spaces[0].at_point(cls.sig[0]), spaces[1].at_point(cls.sig[1])
            if left != right:
                _certify(pm1, pm2, cls.formula, left, semantics)
                return EquivVerdict(DISTINGUISHED, witness=cls.formula, witness_holds_left=left,
                                    stats={"size": size, "classes": len(seen),
                                           "candidates": examined})
    return EquivVerdict(EQUIVALENT, stats={"max_size": max_size, "classes": len(seen),
                                           "candidates": examined})


def _certify(pm1, pm2, f, left, semantics):
    a = Checker(pm1.model, semantics).holds(pm1.point, f)
    b = Checker(pm2.model, semantics).holds(pm2.point, f)
    if a != left or b == left:
        raise AssertionError(f"witness {F.to_str(f)} failed re-checking")


def signature(pm: PointedModel, f: F.Formula, semantics: str = LOCAL) -> np.ndarray:
    """Truth table of ``f`` over every edge subset of the generated submodel."""
    space = DeletionSpace(pm, semantics)
    memo: dict = {}

    def go(g):
        if g in memo:
            return memo[g]
        if isinstance(g, F.Atom):
            r = space.atom(g.name)
        elif isinstance(g, F.Top):
            r = space.top()
        elif isinstance(g, F.Not):
            r = ~go(g.arg)
        elif isinstance(g, F.And):
            r = go(g.left) & go(g.right)
        elif isinstance(g, F.Box):
            r = space.box(go(g.arg))
        elif isinstance(g, F.Del):
            r = space.delete(go(g.guard), go(g.body))
        else:
            raise TypeError(f"{type(g).__name__} is not part of the plain deletion language")
        memo[g] = r
        return r

    return go(f)


# -- set-based deletion game -------------------------------------------------

def _subsets(mask: int):
    """All submasks of ``mask``, in increasing order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def _replace(live, i, row):
    return live[:i] + (row,) + live[i + 1:]


def set_dbisim(pm1: PointedModel, pm2: PointedModel,
               config_cap: int = DEFAULT_CONFIG_CAP) -> EquivVerdict:
    """Greatest post-fixpoint of the set-based deletion game."""
    m1, m2 = pm1.model, pm2.model
    atoms = sorted(set(m1.alphabet) | set(m2.alphabet))
    lab1 = [tuple(m1.val_mask(a) >> i & 1 for a in atoms) for i in range(m1.n)]
    lab2 = [tuple(m2.val_mask(a) >> i & 1 for a in atoms) for i in range(m2.n)]

    start = EquivConfig(m1.succ, m1.index_of(pm1.point), m2.succ, m2.index_of(pm2.point))
    configs = {start}
    frontier = [start]
    while frontier:
        c = frontier.pop()
        if lab1[c.w] != lab2[c.v]:
            continue
        s1, s2 = c.left_live[c.w], c.right_live[c.v]
        nxt = [EquivConfig(c.left_live, a, c.right_live, b) for a in bits(s1) for b in bits(s2)]
        for d1 in _subsets(s1):
            l1 = _replace(c.left_live, c.w, s1 & ~d1)
            for d2 in _subsets(s2):
                nxt.append(EquivConfig(l1, c.w, _replace(c.right_live, c.v, s2 & ~d2), c.v))
        for d in nxt:
            if d not in configs:
                configs.add(d)
                if len(configs) > config_cap:
                    raise ResourceCapError(f"more than {config_cap} game configurations")
                frontier.append(d)

    Z = {c for c in configs if lab1[c.w] == lab2[c.v]}

    def ok(c: EquivConfig) -> bool:
        L, R = c.left_live, c.right_live
        s1, s2 = L[c.w], R[c.v]
        succ1, succ2 = list(bits(s1)), list(bits(s2))

        def rel(a, b):
            return EquivConfig(L, a, R, b) in Z

        for a in succ1:
            if not any(rel(a, b) for b in succ2):
                return False
        for b in succ2:
            if not any(rel(a, b) for a in succ1):
                return False
        # related-pair masks: for each a, which b are related, and vice versa
        to_right = {a: sum(1 << b for b in succ2 if rel(a, b)) for a in succ1}
        to_left = {b: sum(1 << a for a in succ1 if rel(a, b)) for b in succ2}

        def closed(S, T):
            for a in succ1:
                if (S >> a & 1 and not to_right[a] & T) or (
                        not S >> a & 1 and not to_right[a] & s2 & ~T):
                    return False
            for b in succ2:
                if (T >> b & 1 and not to_left[b] & S) or (
                        not T >> b & 1 and not to_left[b] & s1 & ~S):
                    return False
            return True

        def post(S, T):
            return EquivConfig(_replace(L, c.w, s1 & ~S), c.w, _replace(R, c.v, s2 & ~T), c.v)

        left_subsets = list(_subsets(s1))
        right_subsets = list(_subsets(s2))
        pairs = {(S, T) for S in left_subsets for T in right_subsets if closed(S, T)}
        for S in left_subsets:
            partners = [T for T in right_subsets if (S, T) in pairs]
            if partners and not any(post(S, T) in Z for T in partners):
                return False
        for T in right_subsets:
            partners = [S for S in left_subsets if (S, T) in pairs]
            if partners and not any(post(S, T) in Z for S in partners):
                return False
        return True

    rounds = 0
    while True:
        rounds += 1
        bad = {c for c in Z if not ok(c)}
        if not bad:
            break
        Z -= bad
    stats = {"configs": len(configs), "relation": len(Z), "rounds": rounds}
    if start in Z:
        return EquivVerdict(SET_BISIMILAR, relation=frozenset(Z), stats=stats)
    return EquivVerdict(NOT_SET_BISIMILAR, failing=start, stats=stats)


def describe_config(c: EquivConfig, m1: KripkeModel, m2: KripkeModel) -> str:
    def removed(m, live):
        return ",".join(f"{m.worlds[i]}->{m.worlds[j]}" for i, (s, l) in enumerate(zip(m.succ, live))
                        for j in bits(s & ~l)) or "none"
    return (f"({m1.worlds[c.w]} removed {removed(m1, c.left_live)} | "
            f"{m2.worlds[c.v]} removed {removed(m2, c.right_live)})")


def same_signature(pm1: PointedModel, pm2: PointedModel, f: F.Formula, g: F.Formula,
                   semantics: str = LOCAL) -> bool:
    """Do ``f`` and ``g`` agree at every world and edge subset of both models?"""
    return all(np.array_equal(signature(pm, f, semantics), signature(pm, g, semantics))
               for pm in (pm1, pm2))


__all__ = [
    "EQUIVALENT", "DISTINGUISHED", "SET_BISIMILAR", "NOT_SET_BISIMILAR",
    "EquivConfig", "EquivVerdict", "standard_bisim", "bounded_ld_equiv", "set_dbisim",
    "signature", "same_signature", "describe_config", "DeletionSpace",
]
