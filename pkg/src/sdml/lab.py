"""Exhaustive and sampled validity experiments.

A ``Schema`` is a template with upper-case placeholders plus an instance pool
for each placeholder.  ``sweep_validity`` checks every instance on every
pointed model up to a size bound; hybrid schemas additionally quantify their
free nominals over all worlds.  Models are enumerated by integer index (see
``kripke.model_from_index``) so that a sweep can be split into shards and run
on several processes with identical results.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from multiprocessing import Pool

from . import formula as F
from .checker import GLOBAL, LOCAL, Checker, Program, _check_semantics
from .fixtures import model, named
from .errors import ResourceCapError
from .fol import FolEvaluator
from .hybrid import HybridChecker
from .kripke import (DEFAULT_ENUM_CAP, KripkeModel, bits, canonical_worlds, model_count, model_from_index,
                     model_to_json, orbit_representatives)
from .parser import parse_ld, parse_schema
from .translate import reduce_global, standard_translate


@dataclass(frozen=True)
class Schema:
    id: str
    template: str
    pools: tuple[tuple[str, tuple[str, ...]], ...]
    hybrid: bool = False
    semantics: str = LOCAL

    @classmethod
    def uniform(cls, id: str, template: str, pool, hybrid: bool = False,
                semantics: str = LOCAL, **overrides) -> "Schema":
        """Every placeholder draws from ``pool`` unless listed in ``overrides``."""
        names = sorted(F.metavars(parse_schema(template, hybrid=hybrid)))
        pools = tuple((m, tuple(overrides.get(m, pool))) for m in names)
        return cls(id, template, pools, hybrid, semantics)

    @property
    def formula(self) -> F.Formula:
        return parse_schema(self.template, hybrid=self.hybrid)

    def instances(self) -> list[tuple[dict[str, str], F.Formula]]:
        parse = (lambda t: parse_schema(t, hybrid=True)) if self.hybrid else parse_ld
        tmpl = self.formula
        names = [m for m, _ in self.pools]
        missing = F.metavars(tmpl) - set(names)
        if missing:
            raise ValueError(f"no pool for placeholder(s) {sorted(missing)}")
        parsed = [[(t, parse(t)) for t in pool] for _, pool in self.pools]
        out = []
        for combo in itertools.product(*parsed):
            choice = {m: t for m, (t, _) in zip(names, combo)}
            out.append((choice, F.substitute(tmpl, {m: f for m, (_, f) in zip(names, combo)})))
        return out


@dataclass(frozen=True)
class Counterexample:
    model: KripkeModel
    world: str
    instance: F.Formula
    choice: dict
    assignment: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"model": model_to_json(self.model), "world": self.world,
                "instance": F.to_str(self.instance), "choice": self.choice,
                "assignment": self.assignment}


@dataclass(frozen=True)
class SweepReport:
    schema_id: str
    semantics: str
    pool: dict
    max_worlds: int
    atoms: tuple[str, ...]
    models_checked: int
    pointed_checked: int
    instances: int
    failures: int
    counterexamples: tuple[Counterexample, ...]
    models_evaluated: int = 0
    symmetry: bool = False

    @property
    def held(self) -> bool:
        return not self.counterexamples

    def summary(self) -> str:
        verdict = "valid" if self.held else f"FAILS ({self.failures} failing checks)"
        return (f"{self.schema_id}: {verdict} on {self.models_checked} models / "
                f"{self.pointed_checked} pointed models up to {self.max_worlds} worlds, "
                f"{self.instances} instances")

    def to_json(self) -> dict:
        return {"schema": self.schema_id, "semantics": self.semantics, "pool": self.pool,
                "bounds": {"max_worlds": self.max_worlds, "atoms": list(self.atoms)},
                "models_checked": self.models_checked,
                "pointed_models_checked": self.pointed_checked,
                "models_evaluated": self.models_evaluated, "symmetry": self.symmetry,
                "instances": self.instances, "held": self.held, "failures": self.failures,
                "counterexamples": [c.to_json() for c in self.counterexamples]}


# -- sweeping ------------------------------------------------------------------

def _assignments(free: list[str], n: int):
    if not free:
        return [{}]
    return [dict(zip(free, combo)) for combo in itertools.product(range(n), repeat=len(free))]


def _shard(schema: Schema, n: int, atoms: tuple[str, ...], indices, keep: int,
           stop_at_first: bool = False):
    """Check the models of size ``n`` with the given indices.

    Returns ``(models, failures, hits)`` with hits as
    ``(model index, world, instance index, assignment)`` tuples.
    """
    insts = [f for _, f in schema.instances()]
    worlds = canonical_worlds(n)
    full = (1 << n) - 1
    failures = 0
    hits = []
    if schema.hybrid:
        hc = HybridChecker(model_from_index(n, atoms, 0, worlds), schema.semantics)
        nids = [hc.add(f) for f in insts]
        envs = [_assignments(sorted(hc.fv[nid]), n) for nid in nids]
    else:
        prog = Program()
        nids = [prog.add(f) for f in insts]
        ch = Checker(model_from_index(n, atoms, 0, worlds), schema.semantics, program=prog)
    count = 0
    for k in indices:
        count += 1
        m = model_from_index(n, atoms, k, worlds)
        if schema.hybrid:
            hc.rebind(m)
            for j, nid in enumerate(nids):
                for env in envs[j]:
                    bad = full & ~hc.ext(m.succ, nid, dict(env))
                    if bad:
                        failures += 1
                        for w in bits(bad):
                            if len(hits) < keep:
                                hits.append((k, w, j, env))
        else:
            ch.rebind(m)
            for j, nid in enumerate(nids):
                bad = full & ~ch.ext(m.succ, nid)
                if bad:
                    failures += 1
                    for w in bits(bad):
                        if len(hits) < keep:
                            hits.append((k, w, j, {}))
        if stop_at_first and hits:
            break
    return count, failures, hits


def _shard_star(args):
    return _shard(*args)


def _split(items: list, parts: int) -> list[list]:
    step = max(1, -(-len(items) // parts))
    return [items[a:a + step] for a in range(0, len(items), step)]


def model_indices(n: int, atoms, symmetry: bool = True) -> list[int]:
    """Models to visit for an isomorphism-invariant check over ``n`` worlds."""
    if symmetry and n > 1 and n * n + n * len(atoms) <= 20:
        return orbit_representatives(n, atoms)
    return list(range(model_count(n, atoms)))


def sweep_validity(schema: Schema, max_worlds: int = 3, atoms=("p", "q"), jobs: int = 1,
                   keep: int = 5, symmetry: bool = True) -> SweepReport:
    """Check ``schema`` on every pointed model with up to ``max_worlds`` worlds.

    A failing check is one (model, instance, nominal assignment) whose
    extension misses some world; at most ``keep`` counterexamples are stored,
    in enumeration order, whatever ``jobs`` is.  With ``symmetry`` only one
    model per isomorphism class is evaluated; every instance is checked at
    every world and under every nominal assignment, so the verdict covers
    all renamings as well.  ``models_checked`` counts the covered models,
    ``models_evaluated`` the ones actually run.
    """
    _check_semantics(schema.semantics)
    atoms = tuple(atoms)
    insts = schema.instances()
    models = pointed = failures = evaluated = 0
    found: list[Counterexample] = []
    for n in range(1, max_worlds + 1):
        total = model_count(n, atoms)
        todo = model_indices(n, atoms, symmetry)
        tasks = [(schema, n, atoms, part, keep) for part in _split(todo, max(1, jobs))]
        if jobs > 1 and len(tasks) > 1:
            with Pool(jobs) as pool:
                results = pool.map(_shard_star, tasks)
        else:
            results = [_shard_star(t) for t in tasks]
        worlds = canonical_worlds(n)
        for cnt, fails, hits in results:
            evaluated += cnt
            failures += fails
            for k, w, j, env in hits:
                if len(found) < keep:
                    choice, inst = insts[j]
                    found.append(Counterexample(model_from_index(n, atoms, k, worlds), worlds[w],
                                                inst, choice,
                                                {v: worlds[i] for v, i in env.items()}))
        models += total
        pointed += total * n
    return SweepReport(schema.id, schema.semantics, {m: list(p) for m, p in schema.pools},
                       max_worlds, atoms, models, pointed, len(insts), failures, tuple(found),
                       evaluated, symmetry)


def find_counterexample(schema: Schema, max_worlds: int = 3, atoms=("p", "q")):
    """Smallest counterexample to ``schema``: fewest worlds first, then model
    index, then instance order.  ``None`` when none exists within the bound."""
    insts = schema.instances()
    for n in range(1, max_worlds + 1):
        _, _, hits = _shard(schema, n, tuple(atoms), range(model_count(n, atoms)), 1,
                            stop_at_first=True)
        if hits:
            k, w, j, env = hits[0]
            worlds = canonical_worlds(n)
            choice, inst = insts[j]
            return Counterexample(model_from_index(n, tuple(atoms), k, worlds), worlds[w], inst,
                                  choice, {v: worlds[i] for v, i in env.items()})
    return None


# -- bundled schemas -------------------------------------------------------------

BOOLEAN_POOL = ("p", "q", "~q", "p & ~q", "p | q")
HYBRID_POOL = ("p", "q", "p & q", "<>p")

LD_SCHEMAS = (
    Schema.uniform("K", "[-A](B -> C) -> ([-A]B -> [-A]C)", BOOLEAN_POOL),
    Schema.uniform("dual", "[-A]B <-> <-A>B", BOOLEAN_POOL),
    Schema.uniform("boolean", "[-A]B <-> B", BOOLEAN_POOL),
    Schema.uniform("diamond", "[-A]<>B <-> <>(~A & B)", BOOLEAN_POOL),
    Schema.uniform("commute", "[-A][-B]C <-> [-B][-A]C", BOOLEAN_POOL),
)

HYBRID_SCHEMAS = (
    Schema.uniform("nested", "[-A][-B]C <-> !x [-!y (A | @x [-A]@y B)]C", HYBRID_POOL,
                   hybrid=True),
    Schema.uniform("box", "[-A][]B <-> !x []!y (~A -> @x [-A]@y B)", HYBRID_POOL, hybrid=True),
    Schema.uniform("at-atom", "[-A]@x P <-> @x P", HYBRID_POOL, hybrid=True, P=("p", "q")),
    Schema.uniform("at-not", "[-A]@x ~B <-> ~[-A]@x B", HYBRID_POOL, hybrid=True),
    Schema.uniform("at-and", "[-A]@x (B & C) <-> [-A]@x B & [-A]@x C", HYBRID_POOL,
                   hybrid=True),
    Schema.uniform("at-box", "[-A]@x []B <-> !y @x []!z (~(A & @x y) -> @y [-A]@z B)",
                   HYBRID_POOL, hybrid=True),
)

# Commutation fails once the guards may look past the current point.
COMMUTE_MODAL = Schema("commute-modal", "[-A][-B]C <-> [-B][-A]C",
                       (("A", ("p",)), ("B", ("<><>p",)), ("C", ("<>q",))))

# Unfolding a box under a local deletion whose body is itself modal.
BOX_UNFOLD = Schema("box-unfold", "[-A][]B <-> [](~A -> [-A]B)",
                    (("A", ("<>p",)), ("B", ("q", "<>q", "<><>q", "[]q"))))


def schemas_by_id() -> dict[str, Schema]:
    return {s.id: s for s in LD_SCHEMAS + HYBRID_SCHEMAS + (COMMUTE_MODAL, BOX_UNFOLD)}


def parse_schema_file(text: str) -> tuple[Schema, dict]:
    """Parse a ``key: value`` schema description.

    Required key ``schema``; one line per placeholder with a comma-separated
    pool; optional ``id``, ``semantics``, ``hybrid``, ``atoms``, ``max-worlds``.
    Returns the schema and a dict of the search bounds.
    """
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key: value'")
        entries[key.strip()] = value.strip()
    if "schema" not in entries:
        raise ValueError("missing 'schema:' line")
    hybrid = entries.get("hybrid", "no").lower() in ("yes", "true", "1")
    tmpl = entries["schema"]
    names = sorted(F.metavars(parse_schema(tmpl, hybrid=hybrid)))
    pools = []
    for m in names:
        if m not in entries:
            raise ValueError(f"no pool for placeholder {m}")
        pools.append((m, tuple(t.strip() for t in entries[m].split(",") if t.strip())))
    schema = Schema(entries.get("id", "schema"), tmpl, tuple(pools), hybrid,
                    _check_semantics(entries.get("semantics", LOCAL)))
    bounds = {"atoms": tuple(a.strip() for a in entries.get("atoms", "p, q").split(",")
                             if a.strip()),
              "max_worlds": int(entries.get("max-worlds", 3))}
    return schema, bounds


# -- isomorphism ---------------------------------------------------------------

def isomorphic(m1: KripkeModel, w1: str, m2: KripkeModel, w2: str, atoms=None) -> bool:
    """Pointed-model isomorphism by brute force over world permutations."""
    if m1.n != m2.n:
        return False
    atoms = sorted(set(m1.alphabet) | set(m2.alphabet)) if atoms is None else list(atoms)
    i1, i2 = m1.index_of(w1), m2.index_of(w2)
    for perm in itertools.permutations(range(m2.n)):
        if perm[i1] != i2:
            continue
        if any(sum(1 << perm[j] for j in bits(m1.succ[i])) != m2.succ[perm[i]]
               for i in range(m1.n)):
            continue
        if all(sum(1 << perm[j] for j in bits(m1.val_mask(a))) == m2.val_mask(a)
               for a in atoms):
            return True
    return False


# -- named-formula experiments -------------------------------------------------

@dataclass(frozen=True)
class ForcingReport:
    max_worlds: int
    models_checked: int
    satisfying: int
    violations: tuple[tuple[KripkeModel, str], ...]
    witness_holds: bool = False

    @property
    def held(self) -> bool:
        return not self.violations and self.witness_holds


def verify_reflexivity_forcing(max_worlds: int = 3) -> ForcingReport:
    """Wherever the reflexivity formula holds, the point sees itself and its
    only ``p``-successor is itself.  Also checks that the formula is
    satisfied at ``v1`` of the bundled ``p_loop`` model."""
    phi = named("reflexive.sdml")["PHI_R"]
    prog = Program()
    nid = prog.add(phi)
    models = sat = 0
    bad = []
    for n in range(1, max_worlds + 1):
        worlds = canonical_worlds(n)
        ch = None
        for k in range(model_count(n, ("p",))):
            m = model_from_index(n, ("p",), k, worlds)
            ch = Checker(m, program=prog) if ch is None else ch.rebind(m)
            models += 1
            ext = ch.ext(m.succ, nid)
            p = m.val_mask("p")
            for i in bits(ext):
                sat += 1
                if m.succ[i] & p != 1 << i:
                    bad.append((m, worlds[i]))
    m2 = model("p_loop")
    witness = bool(Checker(m2, strict=True).holds("v1", phi)) and ("v1", "v1") in m2.edges
    return ForcingReport(max_worlds, models, sat, tuple(bad), witness)


@dataclass(frozen=True)
class InfinityReport:
    coverage: tuple[tuple[int, str, int], ...]
    seed: int
    satisfying: tuple[tuple[KripkeModel, str], ...]

    @property
    def unsatisfied(self) -> bool:
        return not self.satisfying

    @property
    def models_checked(self) -> int:
        return sum(c for _, _, c in self.coverage)


def verify_phi_infinity_unsat(max_worlds: int = 4, budget: int | None = None,
                              seed: int = 0) -> InfinityReport:
    """Search finite models over ``s, p`` for a point satisfying the infinity
    formula.

    Each size up to ``max_worlds`` is enumerated exhaustively unless it has
    more than ``budget`` models, in which case ``budget`` models are drawn
    uniformly (with replacement) from ``random.Random(seed)``.  The formula is
    a left-nested conjunction, so the cheap first conjunct filters almost
    every model before the rest is evaluated.
    """
    phi = named("infinity.sdml")["PHI_INF"]
    atoms = ("s", "p")
    prog = Program()
    nid = prog.add(phi)
    found = []
    coverage = []
    rng = random.Random(seed)
    for n in range(1, max_worlds + 1):
        total = model_count(n, atoms)
        if budget is None or total <= budget:
            if total > DEFAULT_ENUM_CAP:
                raise ResourceCapError(f"{total} models at {n} worlds; pass a budget to sample")
            indices = range(total)
            coverage.append((n, "exhaustive", total))
        else:
            nbits = n * n + n * len(atoms)
            indices = (rng.getrandbits(nbits) for _ in range(budget))
            coverage.append((n, "sampled", budget))
        worlds = canonical_worlds(n)
        ch = None
        for k in indices:
            m = model_from_index(n, atoms, k, worlds)
            ch = Checker(m, program=prog) if ch is None else ch.rebind(m)
            for i in bits(ch.ext(m.succ, nid)):
                found.append((m, worlds[i]))
    return InfinityReport(tuple(coverage), seed, tuple(found))


@dataclass(frozen=True)
class AgreementReport:
    label: str
    models_checked: int
    disagreements: tuple[tuple[KripkeModel, str], ...]

    @property
    def held(self) -> bool:
        return not self.disagreements


def _fol_pair_agreement(label, first, second, models) -> AgreementReport:
    count = 0
    bad = []
    for m in models:
        count += 1
        e1 = FolEvaluator(m, first)
        e2 = FolEvaluator(m, second)
        for w in m.worlds:
            if e1.holds({"x": w}) != e2.holds({"x": w}):
                bad.append((m, w))
    return AgreementReport(label, count, tuple(bad))


def _models_upto(n_max: int, atoms):
    for n in range(1, n_max + 1):
        worlds = canonical_worlds(n)
        for k in range(model_count(n, atoms)):
            yield model_from_index(n, atoms, k, worlds)


def verify_seeback_definition(max_worlds: int = 4) -> AgreementReport:
    """The modal formula and its first-order counterpart agree on all frames.

    Neither formula mentions a proposition letter, so enumerating frames
    covers every valuation.
    """
    modal = named("seeback.sdml")["PHI1_PLUS"]
    fo = named("seeback.fol")["ALPHA1_PLUS"]
    prog = Program()
    nid = prog.add(modal)
    count = 0
    bad = []
    ch = None
    for m in _models_upto(max_worlds, ()):
        count += 1
        ch = Checker(m, program=prog) if ch is None else ch.rebind(m)
        ext = ch.ext(m.succ, nid)
        ev = FolEvaluator(m, fo)
        for i, w in enumerate(m.worlds):
            if bool(ext >> i & 1) != ev.holds({"x": w}):
                bad.append((m, w))
    return AgreementReport("seeback", count, tuple(bad))


def verify_translation_example(max_worlds: int = 3, sample_worlds: int = 4,
                               sample_size: int = 100_000, seed: int = 0) -> AgreementReport:
    """The raw translation of ``<>[-<>p1][]p2`` agrees with its hand-simplified
    form, exhaustively up to ``max_worlds`` and on a seeded sample beyond."""
    raw = standard_translate(parse_ld("<>[-<>p1][]p2"))
    simple = named("translation_example.fol")["SIMPLIFIED"]
    atoms = ("p1", "p2")
    rng = random.Random(seed)
    nbits = sample_worlds * sample_worlds + sample_worlds * len(atoms)
    worlds = canonical_worlds(sample_worlds)
    sample = (model_from_index(sample_worlds, atoms, rng.getrandbits(nbits), worlds)
              for _ in range(sample_size))
    return _fol_pair_agreement("translation-example", raw, simple,
                               itertools.chain(_models_upto(max_worlds, atoms), sample))


REDUCE_GLOBAL_POOL = (
    "[-p]q", "[-p][]q", "[-p]<>q", "[-p][][]q", "[-p]<><>q",
    "[-p][-q][]r", "[-p][]([-q][]r)", "[-(p & q)][]~r", "[-~p]<>(q | r)", "[-p][](q -> <>r)",
    "[-<>p][]q", "[-[]p]<>q", "[-p]([]q & <>r)", "[-p]~[]q", "[-p][-q]<>r",
    "<>[-p][]q", "[]([-q]<>p)", "[-p][-p][]q", "[-[-q]<>p][]r", "[-p](<>q -> [][-r]<>q)",
)


def verify_reduce_global(max_worlds: int = 3, atoms=("p", "q", "r"),
                         symmetry: bool = True) -> AgreementReport:
    """``reduce_global`` output is equivalent to its input under global
    deletion, at every pointed model in the bound.

    ``models_checked`` counts covered models; with ``symmetry`` only one per
    isomorphism class is evaluated.
    """
    prog = Program()
    pairs = []
    for text in REDUCE_GLOBAL_POOL:
        f = parse_ld(text)
        pairs.append((prog.add(f), prog.add(reduce_global(f))))
    count = 0
    bad = []
    for n in range(1, max_worlds + 1):
        worlds = canonical_worlds(n)
        ch = None
        count += model_count(n, atoms)
        for k in model_indices(n, atoms, symmetry):
            m = model_from_index(n, atoms, k, worlds)
            ch = Checker(m, GLOBAL, program=prog) if ch is None else ch.rebind(m)
            for a, b in pairs:
                diff = ch.ext(m.succ, a) ^ ch.ext(m.succ, b)
                if diff:
                    bad.append((m, worlds[next(bits(diff))]))
    return AgreementReport("reduce-global", count, tuple(bad))


def commute_counterexamples_include(target: KripkeModel, point: str, max_worlds: int = 3):
    """Whether the modal commutation counterexamples include a copy of
    ``target`` at ``point``; returns ``(found, report)``."""
    report = sweep_validity(COMMUTE_MODAL, max_worlds, keep=10_000)
    atoms = ("p", "q")
    for c in report.counterexamples:
        if isomorphic(c.model, c.world, target, point, atoms):
            return True, report
    return False, report


__all__ = ["Schema", "SweepReport", "Counterexample", "sweep_validity", "find_counterexample",
           "LD_SCHEMAS", "HYBRID_SCHEMAS", "COMMUTE_MODAL", "BOX_UNFOLD", "BOOLEAN_POOL",
           "HYBRID_POOL", "verify_reflexivity_forcing", "verify_phi_infinity_unsat",
           "verify_seeback_definition", "verify_translation_example", "verify_reduce_global",
           "isomorphic", "parse_schema_file", "schemas_by_id"]


# -- translation differential ----------------------------------------------------

@dataclass(frozen=True)
class DifferentialReport:
    target: str
    seed: int
    instances: int
    agreed: int
    counterexample: tuple[KripkeModel, str, F.Formula, object] | None = None

    @property
    def held(self) -> bool:
        return self.agreed == self.instances


def verify_translation(target: str = "fol", count: int = 500, seed: int = 0,
                       max_worlds: int = 5, max_size: int = 14, max_del_depth: int = 2,
                       atoms=("p", "q")) -> DifferentialReport:
    """Compare direct evaluation with evaluation of the translation.

    Each instance is a random model (1..``max_worlds`` worlds) and a random
    formula; it agrees when the two evaluations match at every world.
    """
    from .fol import eval_fol
    from .generate import random_formula
    from .kripke import random_model
    from .translate import hybrid_translate

    if target not in ("fol", "hybrid"):
        raise ValueError("target must be 'fol' or 'hybrid'")
    rng = random.Random(seed)
    agreed = 0
    first = None
    for _ in range(count):
        m = random_model(rng, rng.randint(1, max_worlds), atoms)
        f = random_formula(rng, atoms, max_size=max_size, max_del_depth=max_del_depth)
        ext = Checker(m).ext_mask(f)
        if target == "fol":
            t = standard_translate(f)
            got = [eval_fol(m, {"x": w}, t) for w in m.worlds]
        else:
            t = hybrid_translate(f)
            hc = HybridChecker(m)
            mask = hc.ext_mask(t)
            got = [bool(mask >> i & 1) for i in range(m.n)]
        bad = [w for i, w in enumerate(m.worlds) if bool(ext >> i & 1) != got[i]]
        if bad:
            if first is None:
                first = (m, bad[0], f, t)
        else:
            agreed += 1
    return DifferentialReport(target, seed, count, agreed, first)
