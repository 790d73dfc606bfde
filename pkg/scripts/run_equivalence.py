"""Compare the three equivalence checks on the bundled pairs and on random
sparse pairs."""
import argparse
import random

from sdml.equivalence import EQUIVALENT, SET_BISIMILAR, bounded_ld_equiv, set_dbisim, standard_bisim
from sdml.fixtures import model
from sdml.formula import to_str
from sdml.kripke import PointedModel, random_model

PAIRS = [(("p_cycle", "w1"), ("p_loop", "v1"), ("p", "q")),
         (("two_cycle", "w1"), ("one_cycle", "v"), ()),
         (("two_successors", "w"), ("one_successor", "v"), ())]


def compare(a, b, atoms, max_size):
    std = standard_bisim(a, b)[0]
    game = set_dbisim(a, b).outcome
    oracle = bounded_ld_equiv(a, b, atoms=atoms, max_size=max_size)
    return std, game, oracle


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-size", type=int, default=10)
    a = ap.parse_args()
    print(f"# seed: {a.seed}")
    for (m1, w1), (m2, w2), atoms in PAIRS:
        std, game, oracle = compare(PointedModel(model(m1), w1), PointedModel(model(m2), w2),
                                    atoms, a.max_size)
        wit = f" witness {to_str(oracle.witness)}" if oracle.witness else ""
        print(f"{m1},{w1} vs {m2},{w2}: bisimilar={std} game={game} oracle={oracle.outcome}{wit}")
    rng = random.Random(a.seed)
    done = related = bad = 0
    while done < a.pairs:
        atoms = rng.choice([(), ("p",)])
        m1 = random_model(rng, rng.randint(1, 4), atoms, 0.3)
        m2 = random_model(rng, rng.randint(1, 4), atoms, 0.3)
        if sum(bin(s).count("1") for s in m1.succ + m2.succ) > 10:
            continue
        done += 1
        std, game, oracle = compare(PointedModel(m1, m1.worlds[0]), PointedModel(m2, m2.worlds[0]),
                                    atoms, a.max_size)
        if game == SET_BISIMILAR:
            related += 1
            bad += oracle.outcome != EQUIVALENT or not std
    print(f"random pairs: {done}, set-bisimilar: {related}, disagreements: {bad}")
