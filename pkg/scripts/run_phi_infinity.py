"""Look for a finite model of the infinity formula."""
import argparse
import time

from sdml.lab import verify_phi_infinity_unsat

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-worlds", type=int, default=4)
    ap.add_argument("--budget", type=int, default=1_000_000,
                    help="sample this many models at sizes larger than the budget")
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    print(f"# seed: {a.seed}")
    start = time.perf_counter()
    r = verify_phi_infinity_unsat(a.max_worlds, a.budget, a.seed)
    for n, mode, count in r.coverage:
        print(f"{n} worlds: {count} models ({mode})")
    verdict = "no satisfying point" if r.unsatisfied else f"SATISFIED at {len(r.satisfying)} points"
    print(f"{verdict}; {r.models_checked} models in {time.perf_counter() - start:.1f}s")
