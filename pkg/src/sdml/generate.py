"""Seeded random formulas over the six core constructors."""
from __future__ import annotations

import random

from . import formula as F


def random_formula(rng: random.Random, atoms=("p", "q"), max_size: int = 14,
                   max_del_depth: int = 2, size: int | None = None) -> F.Formula:
    """A formula with exactly ``size`` nodes (uniform in 1..max_size when omitted)."""
    if size is None:
        size = rng.randint(1, max_size)
    atoms = tuple(atoms)

    def gen(n: int, dd: int) -> F.Formula:
        if n == 1:
            if not atoms or rng.random() < 0.15:
                return F.TOP
            return F.Atom(rng.choice(atoms))
        if n == 2:
            return (F.Not if rng.random() < 0.5 else F.Box)(gen(1, dd))
        ops = ["not", "box", "and"] + (["del"] if dd > 0 else [])
        op = rng.choice(ops)
        if op == "not":
            return F.Not(gen(n - 1, dd))
        if op == "box":
            return F.Box(gen(n - 1, dd))
        k = rng.randint(1, n - 2)
        if op == "and":
            return F.And(gen(k, dd), gen(n - 1 - k, dd))
        return F.Del(gen(k, dd - 1), gen(n - 1 - k, dd - 1))

    return gen(size, max_del_depth)
