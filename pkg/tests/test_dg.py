from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdgfactor.blocks import c_even, c_odd, c_tilde_even, relation
from cdgfactor.complexes import expand
from cdgfactor.dg import (CDGPresentation, DividedPowerFamily, PresentationError, RingHom, check_d_squared,
                          check_hom_is_dg, homs_agree, identity_hom, same_ring, tensor, unit_ring)
from cdgfactor.graded import Polynomial, Var

from conftest import dg_test_ring, homogeneous_parts, ring_polynomials

RING = dg_test_ring()


# the even block of RING is cut off for window floor -12; products landing
# below the guard degree -13 are truncated, and truncation is not d-stable
GUARD = -13


@given(ring_polynomials(RING), ring_polynomials(RING))
def test_leibniz(p, q):
    for x in homogeneous_parts(p):
        for z in homogeneous_parts(q):
            if x.degree() + z.degree() < GUARD:
                continue
            sign = (-1) ** (x.degree() % 2)
            lhs = RING.d(RING.mul(x, z))
            rhs = RING.mul(RING.d(x), z) + RING.mul(x, RING.d(z)).scale(sign)
            assert lhs == rhs


def test_truncation_below_guard_is_not_d_stable():
    x1, x6 = RING.var("q.x_1"), RING.var("q.x_6")
    assert RING.mul(x1, x6) == Polynomial()
    assert RING.mul(RING.d(x1), x6) + RING.mul(x1, RING.d(x6)) != Polynomial()


@settings(max_examples=200)
@given(ring_polynomials(RING, max_terms=5))
def test_d_squared_on_random_polynomials(p):
    assert RING.d(RING.d(p)) == Polynomial()


@given(ring_polynomials(RING))
def test_d_raises_degree(p):
    for x in homogeneous_parts(p):
        dx = RING.d(x)
        assert not dx or dx.degree() == x.degree() + 1


def test_d_squared_report_passes_on_blocks():
    for ring in (RING, c_odd(-3).ring, c_even(-4, -12).ring, c_tilde_even(-2, 6)):
        assert check_d_squared(ring).ok


def test_planted_d_squared_failure_is_located():
    x, y, z = Var((0,), "x", -3), Var((1,), "y", -2), Var((2,), "z", -1)
    ring = CDGPresentation((x, y, z), {x: Polynomial.var(y), y: Polynomial.var(z)})
    rep = check_d_squared(ring)
    assert not rep.ok
    (bad,) = rep.failures
    assert bad.index == "x" and bad.degree == -3
    assert "z" in bad.detail


# divided-power rewriting -------------------------------------------------------


def test_remark_rewrites():
    C = c_even(-2, -12).ring
    assert C.mul(C.var("x_1"), C.var("x_1")) == C.var("x_2").scale(2)
    assert C.mul(C.var("x_2"), C.var("x_3")) == C.var("x_5").scale(10)


def test_rewrite_truncates_past_cutoff():
    C = c_even(-2, -6).ring  # cutoff 3
    assert C.mul(C.var("x_2"), C.var("x_2")) == Polynomial()


@pytest.mark.parametrize("i,j,terms,total", [(3, 4, (15, 20), 35), (4, 4, (35, 35), 70)])
def test_pascal_step(i, j, terms, total):
    assert (comb(i + j - 1, j), comb(i + j - 1, j - 1)) == terms
    assert sum(terms) == comb(i + j, j) == total


@pytest.mark.parametrize("i,j,k", [(i, j, k) for i in range(1, 9) for j in range(1, 9) for k in range(1, 9)
                                   if i + j + k <= 10])
def test_multinomial_confluence(i, j, k):
    C = c_even(-2, -21).ring
    xi, xj, xk = (C.var(f"x_{n}") for n in (i, j, k))
    left = C.reduce(C.reduce(xi * xj) * xk)
    right = C.reduce(xi * C.reduce(xj * xk))
    want = factorial(i + j + k) // (factorial(i) * factorial(j) * factorial(k))
    assert left == right == C.var(f"x_{i + j + k}").scale(want)


@pytest.mark.parametrize("i,j", [(i, j) for i in range(1, 10) for j in range(1, 10) if i + j <= 10])
def test_relation_derivative_closed_form(i, j):
    R = c_tilde_even(-2, 10)
    y = R.var("y")
    assert R.d(relation(R, i, j)) == (relation(R, i - 1, j) + relation(R, i, j - 1)) * y


def test_relation_derivative_examples():
    R = c_tilde_even(-2, 6)
    assert relation(R, 1, 0) == relation(R, 0, 1) == Polynomial()
    assert R.d(relation(R, 1, 1)) == Polynomial()
    assert R.d(relation(R, 2, 3)) == (relation(R, 1, 3) + relation(R, 2, 2)) * R.var("y")


def test_family_validation():
    x1 = Var((0,), "x_1", -2)
    x2 = Var((1,), "x_2", -5)
    with pytest.raises(PresentationError):
        DividedPowerFamily("x", -2, (x1, x2))
    with pytest.raises(PresentationError):
        DividedPowerFamily("x", -3, (Var((0,), "x_1", -3),))


@pytest.mark.parametrize("build", [
    lambda: CDGPresentation((Var((0,), "x", 1),), {}),
    lambda: CDGPresentation((Var((0,), "x", -1), Var((1,), "x", -2)), {}),
    lambda: CDGPresentation((Var((0,), "x", -1), Var((0,), "y", -2)), {}),
    lambda: CDGPresentation((Var((0,), "x", -2),), {Var((0,), "x", -2): Polynomial.const(1)}),
    lambda: CDGPresentation((), {}, coefficients="F2"),
])
def test_presentation_rejects(build):
    with pytest.raises(PresentationError):
        build()


# homs ------------------------------------------------------------------------


def _block_map():
    """g: c_odd(-3) -> c_odd(-1) (x) c_even(-2), x -> x * x_1, y -> d(x * x_1)."""
    S = c_odd(-3).ring
    T, _ = tensor([c_odd(-1).ring, c_even(-2, -12).ring], ["o.", "e."])
    b = T.var("o.x") * T.var("e.x_1")
    return RingHom(S, T, {S["x"]: b, S["y"]: T.d(b)})


@given(st.data())
def test_hom_commutes_with_d_and_product(data):
    phi = _block_map()
    assert check_hom_is_dg(phi).ok
    S, T = phi.source, phi.target
    p = data.draw(ring_polynomials(S))
    q = data.draw(ring_polynomials(S))
    assert phi(S.d(p)) == T.d(phi(p))
    assert phi(S.mul(p, q)) == T.mul(phi(p), phi(q))


def test_non_dg_hom_is_located():
    S = c_odd(-3).ring
    phi = RingHom(S, S, {S["x"]: S.var("x"), S["y"]: Polynomial()})
    rep = check_hom_is_dg(phi)
    assert not rep.ok
    (bad,) = rep.failures
    assert bad.index == "x" and bad.degree == -3


def test_hom_validation():
    S = c_odd(-3).ring
    with pytest.raises(PresentationError):
        RingHom(S, S, {S["x"]: S.var("y")})  # wrong degree
    with pytest.raises(PresentationError):
        RingHom(S, unit_ring(), {S["x"]: Polynomial(), S["y"]: Polynomial.const(1)})


def test_compose_and_identity():
    blk = c_even(-2, -10)
    pe = blk.p.compose(blk.e)
    assert homs_agree(pe, identity_hom(blk.e.source), "p.e").ok
    idc = identity_hom(blk.ring)
    assert homs_agree(idc.compose(idc), idc, "id.id").ok


def test_p_kills_generators():
    blk = c_odd(-3)
    C = blk.ring
    assert blk.p(Polynomial.const(5) + (C.var("x") * C.var("y")).scale(2)) == Polynomial.const(5)


# tensor -------------------------------------------------------------------------


def test_tensor_inclusions_are_dg():
    T, incl = tensor([c_odd(-3).ring, c_even(-2, -10).ring])
    assert check_d_squared(T).ok
    for phi in incl:
        assert check_hom_is_dg(phi).ok


def test_tensor_name_collision():
    with pytest.raises(PresentationError):
        tensor([c_odd(-3).ring, c_odd(-5).ring], ["", ""])


@pytest.mark.parametrize("floor", [-6, -9])
def test_tensor_associativity_ranks(floor):
    R, S, T = c_odd(-3).ring, c_even(-2, floor).ring, c_odd(-1).ring
    RS, _ = tensor([R, S], ["r.", "s."])
    left, _ = tensor([RS, T], ["", "t."])
    ST, _ = tensor([S, T], ["s.", "t."])
    right, _ = tensor([R, ST], ["r.", ""])
    caps = {"*": 3}
    rl = expand(left, floor, caps).ranks()
    rr = expand(right, floor, caps).ranks()
    assert rl == rr
    # and both equal the rank convolution
    ranks = [expand(X, floor, caps).ranks() for X in (R, S, T)]
    for i in range(floor, 1):
        conv = sum(ranks[0].get(a, 0) * ranks[1].get(b, 0) * ranks[2].get(i - a - b, 0)
                   for a in range(i, 1) for b in range(i - a, 1))
        assert rl[i] == conv


def test_same_ring_is_structural():
    assert same_ring(unit_ring(), unit_ring())
    assert same_ring(c_odd(-3).ring, c_odd(-3).ring)
    assert not same_ring(c_odd(-3).ring, c_odd(-5).ring)
