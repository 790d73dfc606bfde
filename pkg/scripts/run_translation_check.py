"""Differential runs for both translations, the worked translation example,
the frame-definability check and the global reduction."""
import argparse
import time

from sdml.lab import (verify_reduce_global, verify_seeback_definition, verify_translation,
                      verify_translation_example)


def timed(label, fn):
    start = time.perf_counter()
    r = fn()
    print(f"{label}: {'ok' if r.held else 'FAILED'} [{time.perf_counter() - start:.1f}s]", flush=True)
    return r


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sample", type=int, default=100_000)
    a = ap.parse_args()
    print(f"# seed: {a.seed}")
    for target in ("fol", "hybrid"):
        r = timed(f"{target} translation", lambda: verify_translation(target, a.count, a.seed))
        print(f"  agreement {r.agreed}/{r.instances}")
    r = timed("translation example", lambda: verify_translation_example(sample_size=a.sample,
                                                                         seed=a.seed))
    print(f"  {r.models_checked} models")
    r = timed("dead-end definability", verify_seeback_definition)
    print(f"  {r.models_checked} frames")
    r = timed("global reduction", verify_reduce_global)
    print(f"  {r.models_checked} models")
