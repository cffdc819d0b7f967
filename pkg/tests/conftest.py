import sys
import itertools

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from cdgfactor.blocks import c_even, c_odd
from cdgfactor.dg import CDGPresentation, tensor
from cdgfactor.graded import Polynomial, Var

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

# a mixed-parity variable pool for algebra-level properties
POOL = (
    Var((0,), "a", -1),
    Var((1,), "b", -2),
    Var((2,), "c", -3),
    Var((3,), "t", 0),
    Var((4,), "e", -1),
    Var((5,), "f", -4),
)


@st.composite
def monomial_words(draw, pool=POOL, max_len=4):
    """Unsorted factor lists, as a user would write them."""
    n = draw(st.integers(0, max_len))
    return [(draw(st.sampled_from(pool)), draw(st.integers(1, 2))) for _ in range(n)]


@st.composite
def polynomials(draw, pool=POOL, max_terms=4):
    p = Polynomial()
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(st.integers(-5, 5))
        p = p + Polynomial.from_factors(draw(monomial_words(pool)), c)
    return p


def homogeneous_parts(p: Polynomial) -> list:
    parts = {}
    for m, c in p.items():
        deg = sum(v.degree * e for v, e in m)
        parts.setdefault(deg, {})[m] = c
    return [Polynomial(t) for _, t in sorted(parts.items())]


def dg_test_ring() -> CDGPresentation:
    """A tensor of standard blocks: d^2 = 0, both parities, a rewrite family."""
    ring, _ = tensor([c_odd(-1).ring, c_even(-2, -12).ring, c_odd(-3).ring], ["p.", "q.", "r."])
    return ring


@st.composite
def ring_polynomials(draw, ring, max_terms=4, max_len=3):
    pool = ring.variables
    p = Polynomial()
    for _ in range(draw(st.integers(0, max_terms))):
        n = draw(st.integers(0, max_len))
        word = [(draw(st.sampled_from(pool)), 1) for _ in range(n)]
        p = p + Polynomial.from_factors(word, draw(st.integers(-4, 4)))
    return ring.reduce(p)


def brute_force_basis(ring: CDGPresentation, lo: int, caps: int = 6) -> dict:
    """Normal-form monomials by exhaustive exponent search, degrees [lo, 0].

    Deliberately naive: every exponent vector in a bounding box, then filter.
    """
    bounds = []
    for v in ring.variables:
        if v.odd:
            bounds.append(range(2))
        elif v.degree == 0:
            bounds.append(range(caps + 1))
        else:
            bounds.append(range(lo // v.degree + 1))
    fams = [set(f.members) for f in ring.families]
    out = {i: set() for i in range(lo, 1)}
    for exps in itertools.product(*bounds):
        deg = sum(v.degree * e for v, e in zip(ring.variables, exps))
        if deg < lo:
            continue
        used = [(v, e) for v, e in zip(ring.variables, exps) if e]
        if any(sum(e for v, e in used if v in fam) > 1 for fam in fams):
            continue
        out[deg].add(tuple(used))
    return out


@pytest.fixture(scope="session")
def dg_ring():
    return dg_test_ring()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
