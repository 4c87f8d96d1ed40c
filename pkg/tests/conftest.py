import sys

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from imulip.formula import BOT, TOP, And, Atom, Box, Imp, Or
from imulip.sequent import FormulaBag, Sequent

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

settings.register_profile(
    "default", deadline=None, max_examples=100,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

ATOMS = ("p", "q", "r")


def formulas(atoms=ATOMS, max_leaves=6, top=False):
    leaves = [st.sampled_from([Atom(a) for a in atoms]), st.just(BOT)]
    if top:
        leaves.append(st.just(TOP))
    return st.recursive(
        st.one_of(*leaves),
        lambda sub: st.one_of(
            st.builds(And, sub, sub), st.builds(Or, sub, sub),
            st.builds(Imp, sub, sub), st.builds(Box, sub)),
        max_leaves=max_leaves)


def bags(atoms=ATOMS, max_size=3, max_leaves=5):
    return st.lists(formulas(atoms, max_leaves), max_size=max_size).map(FormulaBag)


def sequents(atoms=ATOMS, max_size=3, max_leaves=5):
    return st.builds(Sequent, bags(atoms, max_size, max_leaves),
                     st.none() | formulas(atoms, max_leaves))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
