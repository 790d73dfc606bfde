"""Sabotage games on finite graphs and their winning-condition formulas.

Each round A cuts links out of E's position, then E moves along a live link.
In the ``single-edge`` variant A cuts exactly one link; in the ``definable``
variant A names an atom and every link from E's position to a world with
that atom goes.  E wins on arriving at a goal world (the start counts).  E
loses when stuck off the goal; plays that never reach a goal are A wins.

Unbounded games are solved by an attractor computation on the arena of
(live edges, position, turn) configurations.  With a round bound the arena is
unrolled and A wins iff he can get E stuck off the goal within that many
rounds, which is exactly what ``win_formula_a`` expresses.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from . import formula as F
from .errors import ModelError, ResourceCapError
from .kripke import KripkeModel, bits, canonical_worlds

DEFINABLE = "definable"
SINGLE_EDGE = "single-edge"
VARIANTS = (DEFINABLE, SINGLE_EDGE)

DEFAULT_ARENA_CAP = 1_000_000


@dataclass(frozen=True)
class GameSpec:
    model: KripkeModel
    start: str
    goals: frozenset[str]
    variant: str = DEFINABLE
    atoms: tuple[str, ...] = ()
    round_bound: int | None = None

    def __post_init__(self):
        self.model.index_of(self.start)
        for g in self.goals:
            self.model.index_of(g)
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        missing = [a for a in self.atoms if a not in self.model.alphabet]
        if missing:
            raise ModelError(f"atoms {missing} are not in the model's alphabet")
        if self.round_bound is not None and self.round_bound < 0:
            raise ValueError("round bound must be non-negative")

    @property
    def goal_mask(self) -> int:
        return self.model.mask_of(self.goals)


@dataclass(frozen=True, order=True)
class GameConfig:
    live: tuple[int, ...]
    position: int
    turn: str
    rounds_left: int | None = None


@dataclass(frozen=True)
class Move:
    player: str
    kind: str            # "cut-atom", "cut-edge", "pass", "move"
    atom: str | None = None
    target: int | None = None

    def render(self, model: KripkeModel, source: int | None = None) -> str:
        if self.kind == "cut-atom":
            return f"A cut {self.atom}"
        if self.kind == "cut-edge":
            return f"A cut {model.worlds[source]}->{model.worlds[self.target]}"
        if self.kind == "pass":
            return "A pass"
        return f"E move {model.worlds[self.target]}"


def initial_config(spec: GameSpec) -> GameConfig:
    return GameConfig(spec.model.succ, spec.model.index_of(spec.start), "A", spec.round_bound)


def at_goal(spec: GameSpec, c: GameConfig) -> bool:
    return bool(spec.goal_mask >> c.position & 1)


def legal_moves(spec: GameSpec, c: GameConfig) -> list[Move]:
    """Moves in a fixed order: atoms as listed, edges and targets by world index."""
    row = c.live[c.position]
    if c.turn == "E":
        return [Move("E", "move", target=j) for j in bits(row)]
    if spec.variant == DEFINABLE:
        cuts = [Move("A", "cut-atom", atom=a) for a in spec.atoms]
        if any(row & spec.model.val_mask(a) for a in spec.atoms):
            return cuts
        return [Move("A", "pass")]
    cuts = [Move("A", "cut-edge", target=j) for j in bits(row)]
    return cuts or [Move("A", "pass")]


def apply_move(spec: GameSpec, c: GameConfig, m: Move) -> GameConfig:
    i = c.position
    if m.kind == "move":
        left = None if c.rounds_left is None else c.rounds_left - 1
        return GameConfig(c.live, m.target, "A", left)
    if m.kind == "pass":
        return GameConfig(c.live, i, "E", c.rounds_left)
    cut = spec.model.val_mask(m.atom) if m.kind == "cut-atom" else 1 << m.target
    live = c.live[:i] + (c.live[i] & ~cut,) + c.live[i + 1:]
    return GameConfig(live, i, "E", c.rounds_left)


def is_terminal(spec: GameSpec, c: GameConfig) -> str | None:
    """Winner if the play is over at ``c``, else None."""
    if c.turn == "A" and at_goal(spec, c):
        return "E"
    if c.turn == "A" and c.rounds_left == 0:
        # bounded play ran out: A has won only if E is already stuck
        return "A" if not c.live[c.position] else "E"
    if c.turn == "E" and not c.live[c.position]:
        return "A"
    return None


@dataclass
class Solution:
    winner: str
    strategy: dict[GameConfig, Move]
    arena_size: int
    initial: GameConfig
    rank: dict[GameConfig, int] = field(default_factory=dict)


def build_arena(spec: GameSpec, cap: int = DEFAULT_ARENA_CAP):
    start = initial_config(spec)
    succ: dict[GameConfig, list[tuple[Move, GameConfig]]] = {}
    stack = [start]
    while stack:
        c = stack.pop()
        if c in succ:
            continue
        if is_terminal(spec, c) is not None:
            succ[c] = []
            continue
        out = [(m, apply_move(spec, c, m)) for m in legal_moves(spec, c)]
        succ[c] = out
        if len(succ) > cap:
            raise ResourceCapError(f"arena exceeds {cap} configurations")
        stack.extend(d for _, d in out if d not in succ)
    return start, succ


def solve(spec: GameSpec, cap: int = DEFAULT_ARENA_CAP) -> Solution:
    """Winner and a positional winning strategy for the winner.

    E's attractor is computed by rank: terminal E wins have rank 0, an E
    configuration joins once some move reaches a ranked configuration and an A
    configuration once all of its moves do.  E's strategy always decreases the
    rank; A's strategy keeps the play outside the attractor, preferring the
    move that gets E stuck soonest.
    """
    start, succ = build_arena(spec, cap)
    order = sorted(succ)
    rank: dict[GameConfig, int] = {c: 0 for c in order if is_terminal(spec, c) == "E"}
    r = 0
    while True:
        r += 1
        new = []
        for c in order:
            if c in rank or not succ[c]:
                continue
            hits = [d in rank for _, d in succ[c]]
            if (c.turn == "E" and any(hits)) or (c.turn == "A" and all(hits)):
                new.append(c)
        if not new:
            break
        for c in new:
            rank[c] = r
    winner = "E" if start in rank else "A"
    stop = _stop_ranks(spec, order, succ) if winner == "A" else {}
    strategy: dict[GameConfig, Move] = {}
    for c in order:
        moves = succ[c]
        if not moves:
            continue
        if winner == "E" and c.turn == "E" and c in rank:
            best = min(moves, key=lambda md: rank.get(md[1], float("inf")))
            strategy[c] = best[0]
        elif winner == "A" and c.turn == "A" and c not in rank:
            safe = [(m, d) for m, d in moves if d not in rank]
            strategy[c] = min(safe, key=lambda md: stop.get(md[1], float("inf")))[0]
    return Solution(winner, strategy, len(succ), start, rank)


def _stop_ranks(spec: GameSpec, order, succ) -> dict[GameConfig, int]:
    """Rounds A needs to force E stuck, where he can force it at all.  Used to
    make A's strategy pick the quickest stop among moves that keep him winning."""
    rank = {c: 0 for c in order if is_terminal(spec, c) == "A"}
    r = 0
    while True:
        r += 1
        new = [c for c in order if c not in rank and succ[c] and
               (any if c.turn == "A" else all)(d in rank for _, d in succ[c])]
        if not new:
            return rank
        for c in new:
            rank[c] = r


def strategy_path(spec: GameSpec, sol: Solution, opponent=None) -> list[str]:
    """One play following the winner's strategy; ``opponent`` picks the other side's
    moves (default: first legal move).  Returns the transcript lines."""
    c = sol.initial
    lines = []
    while is_terminal(spec, c) is None:
        moves = legal_moves(spec, c)
        if c.turn == sol.winner:
            m = sol.strategy[c]
        else:
            m = opponent(c, moves) if opponent else moves[0]
        lines.append(m.render(spec.model, c.position))
        c = apply_move(spec, c, m)
        if len(lines) > 4 * (spec.model.edge_count() + 2) * spec.model.n:
            break  # a non-terminating A win: the strategy loops
    return lines


def verify_strategy(spec: GameSpec, sol: Solution) -> bool:
    """Check the strategy against every opponent behaviour.

    Explores all plays consistent with the strategy; the winner must win each
    of them (for A, a cycle counts as a win since E never arrives).
    """
    seen: set[GameConfig] = set()
    stack = [sol.initial]
    while stack:
        c = stack.pop()
        if c in seen:
            continue
        seen.add(c)
        t = is_terminal(spec, c)
        if t is not None:
            if t != sol.winner:
                return False
            continue
        if c.turn == sol.winner:
            if c not in sol.strategy:
                return False
            stack.append(apply_move(spec, c, sol.strategy[c]))
        else:
            stack.extend(apply_move(spec, c, m) for m in legal_moves(spec, c))
    if sol.winner == "E":
        # E must not be able to loop forever: along her strategy the rank drops
        return all(c in sol.rank for c in seen)
    return True


# -- winning-condition formulas ----------------------------------------------

def win_formula_a(rounds: int, goal_atom: str, atoms: Iterable[str]) -> F.Formula:
    """A can get E stuck off the goal within ``rounds`` rounds.

    With an empty atom list A can only pass, which the extra ``[]`` disjunct
    accounts for.
    """
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    atoms = list(atoms)
    not_goal = F.Not(F.Atom(goal_atom))
    stuck = F.Box(F.BOT)
    f = F.And(not_goal, stuck)
    for _ in range(rounds):
        options = [F.Del(F.Atom(a), F.Box(f)) for a in atoms] or [F.Box(f)]
        f = F.And(not_goal, F.big_or([stuck] + options))
    return f


def spec_for_formula(model: KripkeModel, start: str, goal_atom: str, atoms, rounds: int) -> GameSpec:
    if goal_atom not in model.alphabet:
        raise ModelError(f"goal atom {goal_atom!r} is not in the model's alphabet")
    goals = model.names(model.val_mask(goal_atom))
    return GameSpec(model, start, goals, DEFINABLE, tuple(atoms), rounds)


def random_spec(rng: random.Random, max_worlds: int = 4, max_atoms: int = 2,
                max_rounds: int = 3, goal_atom: str = "goal") -> GameSpec:
    n = rng.randint(1, max_worlds)
    atoms = [f"a{k}" for k in range(rng.randint(0, max_atoms))]
    worlds = canonical_worlds(n)
    edges = [(u, v) for u in worlds for v in worlds if rng.random() < 0.45]
    val = {a: [w for w in worlds if rng.random() < 0.5] for a in atoms}
    val[goal_atom] = [w for w in worlds if rng.random() < 0.3]
    m = KripkeModel.from_sets(worlds, edges, val)
    return spec_for_formula(m, rng.choice(worlds), goal_atom, atoms, rng.randint(0, max_rounds))


# -- interactive play and replay ---------------------------------------------

def parse_move(spec: GameSpec, c: GameConfig, text: str) -> Move | None:
    text = " ".join(text.split())
    for m in legal_moves(spec, c):
        line = m.render(spec.model, c.position)
        short = line.split(" ", 1)[1]
        if text in (line, short):
            return m
    return None


def describe(spec: GameSpec, c: GameConfig) -> str:
    m = spec.model
    live = ", ".join(f"{m.worlds[i]}->{m.worlds[j]}" for i, row in enumerate(c.live)
                     for j in bits(row)) or "none"
    return (f"E at {m.worlds[c.position]}, {c.turn} to move; "
            f"goals {{{','.join(sorted(spec.goals))}}}; live links: {live}")


def play_interactive(spec: GameSpec, human: str, inp: TextIO, out: TextIO) -> list[str]:
    """Terminal game loop.  Returns the transcript (one move per line)."""
    if human not in ("A", "E"):
        raise ValueError("human role must be 'A' or 'E'")
    sol = solve(spec)
    c = sol.initial
    transcript: list[str] = []
    while (winner := is_terminal(spec, c)) is None:
        moves = legal_moves(spec, c)
        out.write(describe(spec, c) + "\n")
        if c.turn == human:
            options = ", ".join(m.render(spec.model, c.position).split(" ", 1)[1] for m in moves)
            while True:
                out.write(f"your move ({options}): ")
                out.flush()
                line = inp.readline()
                if not line:
                    out.write("\naborted\n")
                    return transcript
                m = parse_move(spec, c, line.strip())
                if m is not None:
                    break
                out.write(f"illegal move {line.strip()!r}\n")
        else:
            m = sol.strategy.get(c, moves[0])
            out.write(f"engine plays: {m.render(spec.model, c.position)}\n")
        transcript.append(m.render(spec.model, c.position))
        c = apply_move(spec, c, m)
        if len(transcript) > 4 * (spec.model.edge_count() + 2) * spec.model.n:
            winner = "A"
            out.write("play does not reach a goal\n")
            break
    out.write(f"winner: {winner}\n")
    return transcript


def replay(spec: GameSpec, lines: Iterable[str]) -> list[GameConfig]:
    """Configurations visited by a transcript; raises ValueError on an illegal line."""
    c = initial_config(spec)
    states = [c]
    for line in lines:
        line = line.strip()
        if not line:
            continue
        m = parse_move(spec, c, line)
        if m is None or not line.startswith(c.turn):
            raise ValueError(f"illegal move {line!r} at {describe(spec, c)}")
        c = apply_move(spec, c, m)
        states.append(c)
    return states
