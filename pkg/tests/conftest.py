import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sdml import formula as F
from sdml.kripke import KripkeModel, canonical_worlds

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ATOMS = ("p", "q")

atom_st = st.sampled_from(ATOMS).map(F.Atom)


def formulas(atoms=ATOMS, max_leaves=12, with_del=True):
    leaves = st.one_of(st.sampled_from(atoms).map(F.Atom), st.just(F.TOP))

    def extend(children):
        options = [children.map(F.Not), children.map(F.Box),
                   st.tuples(children, children).map(lambda t: F.And(*t))]
        if with_del:
            options.append(st.tuples(children, children).map(lambda t: F.Del(*t)))
        return st.one_of(*options)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def models(draw, max_worlds=4, atoms=ATOMS):
    n = draw(st.integers(1, max_worlds))
    row = st.integers(0, (1 << n) - 1)
    succ = tuple(draw(row) for _ in range(n))
    val = tuple((a, draw(row)) for a in sorted(atoms))
    return KripkeModel(canonical_worlds(n), succ, val)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
