"""Finite Kripke models, edge-deletion states, enumeration and file I/O.

Worlds are strings, but every model also carries an index-based view: world
``i`` is bit ``i`` of a mask, ``succ[i]`` is the successor mask of world ``i``
and each atom maps to the mask of worlds where it holds.  All the evaluators
work on that view.
"""
from __future__ import annotations

import itertools
import json
import random
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import ModelError, ResourceCapError, UnknownAtomError, UnknownWorldError

DEFAULT_ENUM_CAP = 1 << 24

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


def bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class KripkeModel:
    worlds: tuple[str, ...]
    succ: tuple[int, ...]
    val: tuple[tuple[str, int], ...] = ()

    @classmethod
    def from_sets(cls, worlds: Iterable[str], edges: Iterable[tuple[str, str]],
                  val: Mapping[str, Iterable[str]] | None = None) -> "KripkeModel":
        worlds = tuple(worlds)
        if not worlds:
            raise ModelError("a model needs at least one world")
        index: dict[str, int] = {}
        for i, w in enumerate(worlds):
            if not isinstance(w, str) or not w:
                raise ModelError(f"bad world id {w!r}")
            if w in index:
                raise ModelError(f"duplicate world id {w!r}")
            index[w] = i

        def idx(w):
            try:
                return index[w]
            except (KeyError, TypeError):
                raise ModelError(f"reference to undeclared world {w!r}") from None

        succ = [0] * len(worlds)
        for e in edges:
            if len(e) != 2:
                raise ModelError(f"bad edge {e!r}")
            succ[idx(e[0])] |= 1 << idx(e[1])
        vals = []
        for atom, ws in sorted((val or {}).items()):
            if not _ATOM_RE.match(atom) or atom in ("true", "false"):
                raise ModelError(f"bad atom name {atom!r}")
            mask = 0
            for w in ws:
                mask |= 1 << idx(w)
            vals.append((atom, mask))
        return cls(worlds, tuple(succ), tuple(vals))

    @property
    def n(self) -> int:
        return len(self.worlds)

    @cached_property
    def full(self) -> int:
        return (1 << len(self.worlds)) - 1

    @cached_property
    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.worlds)}

    @cached_property
    def _val_map(self) -> dict[str, int]:
        return dict(self.val)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.val)

    def index_of(self, w: str) -> int:
        try:
            return self.index[w]
        except KeyError:
            raise UnknownWorldError(f"unknown world {w!r}") from None

    def val_mask(self, atom: str, strict: bool = False) -> int:
        mask = self._val_map.get(atom)
        if mask is None:
            if strict:
                raise UnknownAtomError(f"atom {atom!r} is not in the model's alphabet")
            return 0
        return mask

    def names(self, mask: int) -> frozenset[str]:
        return frozenset(self.worlds[i] for i in bits(mask))

    def mask_of(self, ws: Iterable[str]) -> int:
        mask = 0
        for w in ws:
            mask |= 1 << self.index_of(w)
        return mask

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return frozenset((self.worlds[i], self.worlds[j])
                         for i, s in enumerate(self.succ) for j in bits(s))

    @property
    def valuation(self) -> dict[str, frozenset[str]]:
        return {a: self.names(m) for a, m in self.val}

    def successors(self, w: str) -> frozenset[str]:
        return self.names(self.succ[self.index_of(w)])

    def edge_count(self) -> int:
        return sum(bin(s).count("1") for s in self.succ)

    def with_atom(self, atom: str, ws: Iterable[str]) -> "KripkeModel":
        """Copy of the model with ``atom`` (re)defined as ``ws``."""
        val = dict(self.val)
        val[atom] = self.mask_of(ws)
        return KripkeModel(self.worlds, self.succ, tuple(sorted(val.items())))

    def relabel(self, names: Iterable[str]) -> "KripkeModel":
        return KripkeModel(tuple(names), self.succ, self.val)


@dataclass(frozen=True)
class PointedModel:
    model: KripkeModel
    point: str

    def __post_init__(self):
        self.model.index_of(self.point)


@dataclass(frozen=True)
class ModelState:
    """A base model together with the edges removed from it so far.

    ``live[i]`` is the mask of successors of world ``i`` that are still
    present; it doubles as the canonical key of the removed-edge set.
    """

    base: KripkeModel
    live: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        if self.live is None:
            object.__setattr__(self, "live", self.base.succ)
        elif len(self.live) != self.base.n or any(
                l & ~s for l, s in zip(self.live, self.base.succ)):
            raise ModelError("removed edges must be a subset of the base edges")

    @classmethod
    def with_removed(cls, base: KripkeModel, removed: Iterable[tuple[str, str]]):
        live = list(base.succ)
        for a, b in removed:
            i, j = base.index_of(a), base.index_of(b)
            if not base.succ[i] >> j & 1:
                raise ModelError(f"edge {a}->{b} is not in the base model")
            live[i] &= ~(1 << j)
        return cls(base, tuple(live))

    @property
    def key(self) -> tuple[int, ...]:
        return self.live

    @property
    def removed(self) -> tuple[tuple[str, str], ...]:
        w = self.base.worlds
        return tuple(sorted((w[i], w[j]) for i, (s, l) in enumerate(zip(self.base.succ, self.live))
                            for j in bits(s & ~l)))

    @property
    def live_edges(self) -> frozenset[tuple[str, str]]:
        w = self.base.worlds
        return frozenset((w[i], w[j]) for i, l in enumerate(self.live) for j in bits(l))

    def successors(self, w: str) -> frozenset[str]:
        return self.base.names(self.live[self.base.index_of(w)])

    def delete_from(self, w: str, targets: Iterable[str]) -> "ModelState":
        i = self.base.index_of(w)
        return self.delete_mask_from(i, self.base.mask_of(targets))

    def delete_mask_from(self, i: int, targets: int) -> "ModelState":
        new = self.live[i] & ~targets
        if new == self.live[i]:
            return self
        live = list(self.live)
        live[i] = new
        return ModelState(self.base, tuple(live))

    def delete_global(self, targets: Iterable[str]) -> "ModelState":
        return self.delete_mask_global(self.base.mask_of(targets))

    def delete_mask_global(self, targets: int) -> "ModelState":
        return ModelState(self.base, tuple(l & ~targets for l in self.live))

    def as_model(self) -> KripkeModel:
        return KripkeModel(self.base.worlds, self.live, self.base.val)


# -- enumeration -------------------------------------------------------------

def canonical_worlds(n: int) -> tuple[str, ...]:
    return tuple(f"w{i}" for i in range(n))


def model_count(n: int, atoms) -> int:
    return 1 << (n * n + n * len(atoms))


def model_from_index(n: int, atoms, k: int, worlds: tuple[str, ...] | None = None) -> KripkeModel:
    """Decode model number ``k``: edge bits first (row-major), then one
    ``n``-bit valuation block per atom."""
    row = (1 << n) - 1
    succ = tuple((k >> (i * n)) & row for i in range(n))
    off = n * n
    val = tuple(sorted((a, (k >> (off + j * n)) & row) for j, a in enumerate(atoms)))
    return KripkeModel(worlds or canonical_worlds(n), succ, val)


def model_index(m: KripkeModel, atoms) -> int:
    n = m.n
    k = 0
    for i, s in enumerate(m.succ):
        k |= s << (i * n)
    for j, a in enumerate(atoms):
        k |= m.val_mask(a) << (n * n + j * n)
    return k


def enumerate_models(n: int, atoms=(), cap: int = DEFAULT_ENUM_CAP,
                     start: int = 0, stop: int | None = None) -> Iterator[KripkeModel]:
    """Stream every model over worlds ``w0..w{n-1}`` and ``atoms``.

    The order is the integer order of ``model_from_index``; ``start``/``stop``
    select a shard.
    """
    if n < 1:
        raise ValueError("need at least one world")
    atoms = list(atoms)
    total = model_count(n, atoms)
    if total > cap:
        raise ResourceCapError(f"{total} models exceed the enumeration cap {cap}")
    worlds = canonical_worlds(n)
    for k in range(start, total if stop is None else min(stop, total)):
        yield model_from_index(n, atoms, k, worlds)


def orbit_representatives(n: int, atoms=()) -> list[int]:
    """Indices of the models that are least in their isomorphism class.

    Every model over ``w0..w{n-1}`` is a renaming of exactly one returned
    model, so a check that is invariant under renaming worlds may skip the
    rest.  Vectorised over all ``model_count(n, atoms)`` indices.
    """
    import numpy as np

    nbits = n * n + n * len(atoms)
    if nbits > 24:
        raise ResourceCapError(f"orbit computation over 2^{nbits} models is too large")
    idx = np.arange(1 << nbits, dtype=np.int64)
    best = idx.copy()
    for perm in itertools.permutations(range(n)):
        moved = np.zeros_like(idx)
        for i in range(n):
            for j in range(n):
                moved |= ((idx >> (i * n + j)) & 1) << (perm[i] * n + perm[j])
        for a in range(len(atoms)):
            off = n * n + a * n
            for i in range(n):
                moved |= ((idx >> (off + i)) & 1) << (off + perm[i])
        np.minimum(best, moved, out=best)
    return np.flatnonzero(best == idx).tolist()


def random_model(rng: random.Random, n: int, atoms=(), edge_prob: float = 0.5,
                 atom_prob: float = 0.5) -> KripkeModel:
    succ = tuple(sum(1 << j for j in range(n) if rng.random() < edge_prob) for _ in range(n))
    val = tuple(sorted((a, sum(1 << j for j in range(n) if rng.random() < atom_prob))
                       for a in atoms))
    return KripkeModel(canonical_worlds(n), succ, val)


def generated_submodel(m: KripkeModel, point: str) -> KripkeModel:
    """Restriction of ``m`` to the worlds reachable from ``point``."""
    start = m.index_of(point)
    seen = 1 << start
    frontier = [start]
    while frontier:
        i = frontier.pop()
        new = m.succ[i] & ~seen
        seen |= new
        frontier.extend(bits(new))
    keep = list(bits(seen))
    pos = {old: k for k, old in enumerate(keep)}

    def remap(mask):
        return sum(1 << pos[j] for j in bits(mask & seen))

    return KripkeModel(tuple(m.worlds[i] for i in keep),
                       tuple(remap(m.succ[i]) for i in keep),
                       tuple((a, remap(mask)) for a, mask in m.val))


# -- I/O ---------------------------------------------------------------------

def model_to_json(m: KripkeModel) -> dict:
    return {
        "worlds": list(m.worlds),
        "edges": sorted([list(e) for e in m.edges], key=lambda e: (m.index[e[0]], m.index[e[1]])),
        "val": {a: sorted(ws, key=m.index.__getitem__) for a, ws in m.valuation.items()},
    }


def model_from_json(data) -> KripkeModel:
    if not isinstance(data, dict):
        raise ModelError("model file must hold a JSON object")
    unknown = set(data) - {"worlds", "edges", "val"}
    if unknown:
        raise ModelError(f"unknown keys in model file: {sorted(unknown)}")
    worlds = data.get("worlds")
    if not isinstance(worlds, list):
        raise ModelError("'worlds' must be a list")
    edges = data.get("edges", [])
    if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2 for e in edges):
        raise ModelError("'edges' must be a list of [source, target] pairs")
    val = data.get("val", {})
    if not isinstance(val, dict) or not all(isinstance(v, list) for v in val.values()):
        raise ModelError("'val' must map atom names to lists of worlds")
    return KripkeModel.from_sets(worlds, [tuple(e) for e in edges], val)


def load_model(path) -> KripkeModel:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ModelError(f"{path}: malformed JSON ({e})") from None
    except OSError as e:
        raise ModelError(f"{path}: {e.strerror}") from None
    return model_from_json(data)


def save_model(m: KripkeModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_json(m), indent=1) + "\n")


def to_dot(m: KripkeModel, state: ModelState | None = None, name: str = "M") -> str:
    """Graphviz rendering; removed edges of ``state`` are drawn dashed."""
    lines = [f"digraph {name} {{"]
    for w in m.worlds:
        label = ",".join(a for a, mask in m.val if mask >> m.index[w] & 1)
        text = f"{w}\\n{label}" if label else w
        lines.append(f'  "{w}" [label="{text}"];')
    live = state.live_edges if state is not None else m.edges
    for a, b in sorted(m.edges, key=lambda e: (m.index[e[0]], m.index[e[1]])):
        style = "" if (a, b) in live else " [style=dashed]"
        lines.append(f'  "{a}" -> "{b}"{style};')
    lines.append("}")
    return "\n".join(lines)
