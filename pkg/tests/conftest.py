import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from condcalc.syntax import And, Bot, Box, Cond, Neg, Var

settings.register_profile(
    "default", max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "60")), deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

names = st.sampled_from(["a", "b", "c"])


def formulas(modal=Cond, max_leaves=6):
    leaves = st.one_of(names.map(Var), st.just(Bot()))

    def grow(sub):
        parts = [sub.map(Neg), st.tuples(sub, sub).map(lambda t: And(*t))]
        if modal is Cond:
            parts.append(st.tuples(sub, sub).map(lambda t: Cond(*t)))
        elif modal is Box:
            parts.append(sub.map(Box))
        return st.one_of(*parts)

    return st.recursive(leaves, grow, max_leaves=max_leaves)


def props(max_leaves=6):
    return formulas(modal=None, max_leaves=max_leaves)


cond_formulas = formulas(Cond)
box_formulas = formulas(Box)
any_formulas = st.one_of(cond_formulas, box_formulas)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(f"criterion {n}: {mod.RESULTS[n]}")
