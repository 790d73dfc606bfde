"""Solve the intro games and compare the bounded winning formula with the
solver on random arenas."""
import argparse
import random

from sdml import game as G
from sdml.checker import evaluate
from sdml.fixtures import model

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--specs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    print(f"# seed: {a.seed}")
    m = model("intro")
    for variant in G.VARIANTS:
        spec = G.GameSpec(m, "i", frozenset({"t", "g"}), variant, ("p", "q"))
        sol = G.solve(spec)
        print(f"{variant}: winner {sol.winner}, arena {sol.arena_size}, "
              f"play {' / '.join(G.strategy_path(spec, sol))}")
    rng = random.Random(a.seed)
    agree = 0
    for _ in range(a.specs):
        spec = G.random_spec(rng)
        f = G.win_formula_a(spec.round_bound, "goal", spec.atoms)
        agree += evaluate(spec.model, spec.start, f) == (G.solve(spec).winner == "A")
    print(f"formula/solver agreement: {agree}/{a.specs}")
