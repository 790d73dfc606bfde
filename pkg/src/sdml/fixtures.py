"""Bundled models and named formulas.

Named-formula files hold lines ``NAME := formula`` with ``#`` comments.  In
``.sdml`` files an upper-case identifier on the right refers to an earlier
definition in the same file; ``.fol`` files hold first-order formulas.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from . import formula as F
from .errors import ParseError
from .kripke import KripkeModel, load_model
from .parser import parse_fol, parse_schema

_DATA = resources.files("sdml") / "data"

MODELS = ("intro", "intro_goal", "order_matters", "p_cycle", "p_loop", "two_cycle", "one_cycle",
          "two_successors", "one_successor", "spy_truncated")


def data_path(*parts: str) -> Path:
    return Path(str(_DATA.joinpath(*parts)))


def model(name: str) -> KripkeModel:
    return load_model(data_path("models", f"{name}.json"))


def parse_definitions(text: str, first_order: bool = False) -> dict:
    defs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition(":=")
        name = name.strip()
        if not sep or not name.isidentifier():
            raise ParseError(f"line {lineno}: expected 'NAME := formula'", 0, raw)
        if first_order:
            defs[name] = parse_fol(body)
            continue
        f = parse_schema(body)
        missing = F.metavars(f) - set(defs)
        if missing:
            raise ParseError(f"line {lineno}: undefined {sorted(missing)}", 0, raw)
        defs[name] = F.substitute(f, defs)
    return defs


def named(filename: str) -> dict:
    """All definitions of a bundled formula file, e.g. ``named("infinity.sdml")``."""
    text = data_path("formulas", filename).read_text()
    return parse_definitions(text, first_order=filename.endswith(".fol"))
