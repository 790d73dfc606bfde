"""Command-line front end: ``sdml <command> ...``.

Exit codes: 0 when the run completed (whatever the verdict), 1 when a run
that asserts a property found a violation, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__, fol
from . import formula as F
from . import game as G
from . import lab
from .checker import GLOBAL, LOCAL, Checker, Trace, reference_eval
from .equivalence import bounded_ld_equiv, set_dbisim, standard_bisim
from .errors import SdmlError
from .fixtures import MODELS, data_path, model as bundled_model
from .generate import random_formula
from .kripke import KripkeModel, ModelState, PointedModel, load_model, model_to_json, random_model
from .parser import parse_ld
from .translate import hybrid_translate, simplify_fol, simplify_hybrid, standard_translate


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _csv(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def load_model_arg(ref: str) -> KripkeModel:
    """A model file path, or the name of a bundled model (``intro`` or ``intro.json``)."""
    path = Path(ref)
    if path.exists():
        return load_model(path)
    name = path.name[:-5] if path.name.endswith(".json") else path.name
    if name in MODELS:
        return bundled_model(name)
    raise UsageError(f"no model file {ref!r} (bundled models: {', '.join(MODELS)})")


class Output:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def emit(self, lines, payload: dict) -> None:
        if self.fmt == "json":
            self.stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        else:
            self.stream.write("\n".join(lines) + "\n")


# -- check / translate -------------------------------------------------------------

def cmd_check(args, out: Output) -> int:
    m = load_model_arg(args.model)
    f = parse_ld(args.formula)
    m.index_of(args.world)
    value = Checker(m, args.semantics, strict=args.strict).holds(args.world, f)
    lines = [str(value).lower()]
    payload = {"command": "check", "formula": F.to_str(f), "world": args.world,
               "semantics": args.semantics, "value": value}
    if args.trace:
        trace = Trace()
        reference_eval(ModelState(m), args.world, f, args.semantics, args.strict, trace)
        rendered = trace.render()
        lines.append(rendered or "(no deletions)")
        payload["trace"] = [{"depth": e.depth, "world": e.world, "guard": F.to_str(e.guard),
                             "extension": sorted(e.extension),
                             "removed": [list(x) for x in e.removed]} for e in trace.events]
    out.emit(lines, payload)
    return 0


def cmd_translate(args, out: Output) -> int:
    f = parse_ld(args.formula)
    if args.to == "fol":
        t = standard_translate(f)
        if args.simplify:
            t = simplify_fol(t)
        text = fol.to_str(t)
    else:
        t = hybrid_translate(f)
        if args.simplify:
            t = simplify_hybrid(t)
        text = F.to_str(t)
    out.emit([text], {"command": "translate", "to": args.to, "formula": F.to_str(f),
                      "simplified": args.simplify, "result": text})
    return 0


def cmd_verify_translation(args, out: Output) -> int:
    r = lab.verify_translation(args.to, args.random, args.seed, args.max_worlds,
                               args.max_size, args.max_del)
    lines = [f"# seed: {args.seed}",
             f"agreement {r.agreed}/{r.instances} ({args.to}, models <= {args.max_worlds} "
             f"worlds, formulas <= {args.max_size} nodes)"]
    payload = {"command": "verify-translation", "to": args.to, "seed": args.seed,
               "instances": r.instances, "agreed": r.agreed, "counterexample": None}
    if r.counterexample:
        m, w, f, t = r.counterexample
        tt = fol.to_str(t) if args.to == "fol" else F.to_str(t)
        lines += ["counterexample:", json.dumps(model_to_json(m), sort_keys=True),
                  f"formula: {F.to_str(f)}", f"world: {w}", f"translation: {tt}"]
        payload["counterexample"] = {"model": model_to_json(m), "world": w,
                                     "formula": F.to_str(f), "translation": tt}
    out.emit(lines, payload)
    return 0 if r.held else 1


# -- equivalence ---------------------------------------------------------------------

def cmd_equiv(args, out: Output) -> int:
    m1, m2 = load_model_arg(args.model1), load_model_arg(args.model2)
    pm1, pm2 = PointedModel(m1, args.w1), PointedModel(m2, args.w2)
    payload = {"command": "equiv", "method": args.method, "witness": None}
    if args.method == "standard":
        ok, rel = standard_bisim(pm1, pm2)
        verdict = "bisimilar" if ok else "not-bisimilar"
        lines = [verdict]
        payload.update(verdict=verdict, equivalent=ok)
    elif args.method == "formulas":
        atoms = sorted(set(m1.alphabet) | set(m2.alphabet))
        v = bounded_ld_equiv(pm1, pm2, atoms, max_size=args.max_size,
                             max_del_depth=args.max_del)
        lines = [v.outcome]
        payload.update(verdict=v.outcome, equivalent=v.equivalent, stats=v.stats)
        if v.witness is not None:
            side = "left" if v.witness_holds_left else "right"
            lines.append(f"witness: {F.to_str(v.witness)} (true on the {side})")
            payload["witness"] = F.to_str(v.witness)
            payload["witness_holds_left"] = v.witness_holds_left
    else:
        v = set_dbisim(pm1, pm2)
        lines = [v.outcome]
        payload.update(verdict=v.outcome, equivalent=v.equivalent, stats=v.stats)
    out.emit(lines, payload)
    return 0


# -- games -------------------------------------------------------------------------------

def _game_spec(args) -> G.GameSpec:
    m = load_model_arg(args.model)
    atoms = _csv(args.atoms) if args.atoms else m.alphabet
    return G.GameSpec(m, args.start, frozenset(_csv(args.goals)), args.variant, atoms,
                      args.rounds)


def cmd_game_solve(args, out: Output) -> int:
    spec = _game_spec(args)
    sol = G.solve(spec)
    play = G.strategy_path(spec, sol)
    lines = [f"winner: {sol.winner}", f"arena: {sol.arena_size} configurations",
             "strategy play:"] + [f"  {line}" for line in play]
    out.emit(lines, {"command": "game solve", "variant": spec.variant, "winner": sol.winner,
                     "arena_size": sol.arena_size, "play": play,
                     "rounds": spec.round_bound})
    return 0


def cmd_game_play(args, out: Output, stdin) -> int:
    spec = _game_spec(args)
    transcript = G.play_interactive(spec, args.role, stdin, out.stream)
    if args.transcript:
        Path(args.transcript).write_text("\n".join(transcript) + "\n")
    return 0


def cmd_game_formula(args, out: Output) -> int:
    f = G.win_formula_a(args.rounds, args.goal_atom, _csv(args.atoms))
    text = F.to_str(f)
    out.emit([text], {"command": "game formula", "rounds": args.rounds,
                      "goal_atom": args.goal_atom, "atoms": list(_csv(args.atoms)),
                      "formula": text})
    return 0


# -- lab ---------------------------------------------------------------------------------

def cmd_lab_validities(args, out: Output) -> int:
    atoms = _csv(args.atoms)
    schemas = lab.LD_SCHEMAS + lab.HYBRID_SCHEMAS
    reports = [lab.sweep_validity(s, args.max_worlds, atoms, jobs=args.jobs) for s in schemas]
    lines = [r.summary() for r in reports]
    ok = all(r.held for r in reports)
    modal = lab.sweep_validity(lab.COMMUTE_MODAL, args.max_worlds, atoms, jobs=args.jobs)
    lines.append(f"{lab.COMMUTE_MODAL.id} (expected to fail): "
                 f"{modal.failures} failing checks")
    for c in modal.counterexamples[:1]:
        lines.append(f"  e.g. at {c.world}: {json.dumps(model_to_json(c.model), sort_keys=True)}")
    ok = ok and not modal.held
    out.emit(lines, {"command": "lab validities", "reports": [r.to_json() for r in reports],
                     "expected_failure": modal.to_json(), "ok": ok})
    return 0 if ok else 1


def cmd_lab_reflexive(args, out: Output) -> int:
    r = lab.verify_reflexivity_forcing(args.max_worlds)
    lines = [f"models checked: {r.models_checked}, satisfying points: {r.satisfying}",
             f"violations: {len(r.violations)}",
             f"satisfied at p_loop/v1: {str(r.witness_holds).lower()}"]
    out.emit(lines, {"command": "lab reflexive", "max_worlds": r.max_worlds,
                     "models_checked": r.models_checked, "satisfying": r.satisfying,
                     "violations": [{"model": model_to_json(m), "world": w}
                                    for m, w in r.violations],
                     "witness_holds": r.witness_holds, "ok": r.held})
    return 0 if r.held else 1


def cmd_lab_phi_infinity(args, out: Output) -> int:
    r = lab.verify_phi_infinity_unsat(args.max_worlds, args.budget, args.seed)
    lines = [f"# seed: {args.seed}"]
    lines += [f"{n} worlds: {mode} {count} models" for n, mode, count in r.coverage]
    lines.append("satisfying points: " + (str(len(r.satisfying)) if r.satisfying else "none"))
    out.emit(lines, {"command": "lab phi-infinity", "seed": args.seed,
                     "coverage": [{"worlds": n, "mode": mode, "models": c}
                                  for n, mode, c in r.coverage],
                     "satisfying": [{"model": model_to_json(m), "world": w}
                                    for m, w in r.satisfying],
                     "ok": r.unsatisfied})
    return 0 if r.unsatisfied else 1


def cmd_lab_search(args, out: Output) -> int:
    path = Path(args.schema)
    if not path.exists():
        bundled = data_path("search", path.name if path.suffix else f"{path.name}.txt")
        path = bundled if bundled.exists() else path
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read schema file: {exc}") from exc
    try:
        schema, bounds = lab.parse_schema_file(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.semantics:
        schema = lab.Schema(schema.id, schema.template, schema.pools, schema.hybrid,
                            args.semantics)
    max_worlds = args.max_worlds or bounds["max_worlds"]
    c = lab.find_counterexample(schema, max_worlds, bounds["atoms"])
    payload = {"command": "lab search", "schema": schema.id, "semantics": schema.semantics,
               "max_worlds": max_worlds, "counterexample": c.to_json() if c else None}
    if c is None:
        lines = [f"no counterexample up to {max_worlds} worlds ({schema.semantics} semantics)"]
    else:
        lines = [f"counterexample ({schema.semantics} semantics) at {c.world}",
                 f"instance: {F.to_str(c.instance)}",
                 "model: " + json.dumps(model_to_json(c.model), sort_keys=True)]
    out.emit(lines, payload)
    return 0


# -- generation --------------------------------------------------------------------------

def cmd_gen(args, out: Output) -> int:
    rng = random.Random(args.seed)
    atoms = _csv(args.atoms)
    if args.kind == "model":
        m = random_model(rng, args.worlds, atoms, args.edge_prob)
        payload = {"command": "gen", "kind": "model", "seed": args.seed,
                   "model": model_to_json(m)}
        out.emit([f"# seed: {args.seed}", json.dumps(model_to_json(m), indent=2)], payload)
    else:
        items = [F.to_str(random_formula(rng, atoms, args.max_size, args.max_del))
                 for _ in range(args.count)]
        out.emit([f"# seed: {args.seed}"] + items,
                 {"command": "gen", "kind": "formula", "seed": args.seed, "formulas": items})
    return 0


# -- wiring ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sdml", description="Sabotage modal logic toolkit")
    p.add_argument("--version", action="version", version=f"sdml {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="evaluate a formula at a world")
    c.add_argument("--model", required=True)
    c.add_argument("--world", required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--semantics", choices=(LOCAL, GLOBAL), default=LOCAL)
    c.add_argument("--strict", action="store_true", help="unknown atoms are errors")
    c.add_argument("--trace", action="store_true", help="print every deletion step")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("translate", parents=[common], help="first-order or hybrid translation")
    t.add_argument("--to", choices=("fol", "hybrid"), required=True)
    t.add_argument("--formula", required=True)
    t.add_argument("--simplify", action="store_true")
    t.set_defaults(func=cmd_translate)

    v = sub.add_parser("verify-translation", parents=[common],
                       help="random differential test of a translation")
    v.add_argument("--to", choices=("fol", "hybrid"), required=True)
    v.add_argument("--random", type=int, default=500)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-worlds", type=int, default=5)
    v.add_argument("--max-size", type=int, default=14)
    v.add_argument("--max-del", type=int, default=2)
    v.set_defaults(func=cmd_verify_translation)

    e = sub.add_parser("equiv", parents=[common], help="compare two pointed models")
    e.add_argument("--model1", required=True)
    e.add_argument("--w1", required=True)
    e.add_argument("--model2", required=True)
    e.add_argument("--w2", required=True)
    e.add_argument("--method", choices=("formulas", "setgame", "standard"), default="formulas")
    e.add_argument("--max-size", type=int, default=8)
    e.add_argument("--max-del", type=int, default=None)
    e.set_defaults(func=cmd_equiv)

    g = sub.add_parser("game", help="sabotage games").add_subparsers(
        dest="game_command", required=True, parser_class=_Parser)
    for name, func in (("solve", cmd_game_solve), ("play", cmd_game_play)):
        gp = g.add_parser(name, parents=[common])
        gp.add_argument("--model", required=True)
        gp.add_argument("--start", required=True)
        gp.add_argument("--goals", required=True)
        gp.add_argument("--variant", choices=G.VARIANTS, default=G.DEFINABLE)
        gp.add_argument("--atoms", default=None)
        gp.add_argument("--rounds", type=int, default=None)
        if name == "play":
            gp.add_argument("--as", dest="role", choices=("E", "A"), required=True)
            gp.add_argument("--transcript", default=None, help="write the moves to this file")
        gp.set_defaults(func=func)
    gf = g.add_parser("formula", parents=[common])
    gf.add_argument("--rounds", type=int, required=True)
    gf.add_argument("--goal-atom", required=True)
    gf.add_argument("--atoms", default="p,q")
    gf.set_defaults(func=cmd_game_formula)

    lb = sub.add_parser("lab", help="bounded validity experiments").add_subparsers(
        dest="lab_command", required=True, parser_class=_Parser)
    lv = lb.add_parser("validities", parents=[common])
    lv.add_argument("--max-worlds", type=int, default=3)
    lv.add_argument("--atoms", default="p,q")
    lv.add_argument("--jobs", type=int, default=1)
    lv.set_defaults(func=cmd_lab_validities)
    lr = lb.add_parser("reflexive", parents=[common])
    lr.add_argument("--max-worlds", type=int, default=3)
    lr.set_defaults(func=cmd_lab_reflexive)
    li = lb.add_parser("phi-infinity", parents=[common])
    li.add_argument("--max-worlds", type=int, default=3)
    li.add_argument("--budget", type=int, default=None,
                    help="sample this many models at any size with more")
    li.add_argument("--seed", type=int, default=0)
    li.set_defaults(func=cmd_lab_phi_infinity)
    ls = lb.add_parser("search", parents=[common])
    ls.add_argument("--schema", required=True)
    ls.add_argument("--semantics", choices=(LOCAL, GLOBAL), default=None)
    ls.add_argument("--max-worlds", type=int, default=None)
    ls.set_defaults(func=cmd_lab_search)

    gn = sub.add_parser("gen", parents=[common], help="random models or formulas")
    gn.add_argument("kind", choices=("model", "formula"))
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--atoms", default="p,q")
    gn.add_argument("--worlds", type=int, default=3)
    gn.add_argument("--edge-prob", type=float, default=0.5)
    gn.add_argument("--count", type=int, default=1)
    gn.add_argument("--max-size", type=int, default=10)
    gn.add_argument("--max-del", type=int, default=2)
    gn.set_defaults(func=cmd_gen)
    return p


def main(argv=None, stdout=None, stderr=None, stdin=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        out = Output(getattr(args, "format", "text"), stdout)
        if args.func is cmd_game_play:
            return cmd_game_play(args, out, stdin or sys.stdin)
        return args.func(args, out)
    except UsageError as exc:
        stderr.write(f"sdml: error: {exc}\n")
        return 2
    except (SdmlError, ValueError, OSError) as exc:
        stderr.write(f"sdml: error: {exc}\n")
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
