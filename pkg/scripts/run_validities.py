"""Sweep every bundled validity schema and the failing commutation instance."""
import argparse
import json
import time
from dataclasses import dataclass

from sdml.lab import COMMUTE_MODAL, HYBRID_SCHEMAS, LD_SCHEMAS, sweep_validity


@dataclass(frozen=True)
class Config:
    max_worlds: int = 3
    atoms: tuple[str, ...] = ("p", "q")
    jobs: int = 1
    symmetry: bool = True


def run(cfg: Config) -> list[dict]:
    rows = []
    for schema in LD_SCHEMAS + HYBRID_SCHEMAS + (COMMUTE_MODAL,):
        start = time.perf_counter()
        r = sweep_validity(schema, cfg.max_worlds, cfg.atoms, jobs=cfg.jobs, symmetry=cfg.symmetry)
        print(f"{r.summary()}  [{time.perf_counter() - start:.1f}s]", flush=True)
        rows.append(r.to_json())
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-worlds", type=int, default=3)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--no-symmetry", action="store_true")
    ap.add_argument("--out", help="write the reports as JSON")
    a = ap.parse_args()
    rows = run(Config(a.max_worlds, jobs=a.jobs, symmetry=not a.no_symmetry))
    if a.out:
        with open(a.out, "w") as fh:
            json.dump(rows, fh, indent=2)
