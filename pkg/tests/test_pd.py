from fractions import Fraction
from math import factorial

import pytest

from cdgfactor.blocks import c_even
from cdgfactor.dg import CDGPresentation, check_d_squared, tensor
from cdgfactor.graded import Polynomial, Var
from cdgfactor.pd import (Char0Gamma, DividedPowerGamma, PDRejected, TableGamma, check_pd,
                          pd_obstruction_witness)


def rational_ring():
    """Q[u, v] (x) Lambda[s, w], degrees -2, -4, -1, -3, with du = s."""
    u = Var((0,), "u", -2)
    s = Var((1,), "s", -1)
    v = Var((2,), "v", -4)
    w = Var((3,), "w", -3)
    return CDGPresentation((u, s, v, w), {u: Polynomial.var(s)}, coefficients="Q")


def char0_elements(R):
    u, v, s, w = (R.var(n) for n in "uvsw")
    return [u, v, u * u + v.scale(3), (s * w).scale(Fraction(1, 2)), u.scale(-2), v * u + (s * w * u)]


def test_char0_passes_pd1_pd2():
    R = rational_ring()
    assert check_d_squared(R).ok
    elems = char0_elements(R)
    assert len(elems) >= 5
    rep = check_pd(Char0Gamma(R), elems, 4, 4)
    assert rep.ok
    assert not rep.tainted


def test_char0_needs_rationals():
    with pytest.raises(PDRejected):
        Char0Gamma(c_even(-2, -10).ring)


def dp_ring():
    return c_even(-2, -50).ring  # cutoff 25, no truncation for k + l <= 8 and i <= 3


def dp_elements(C):
    return [C.var("x_1"), C.var("x_2"), C.var("x_1").scale(2), C.var("x_3").scale(-1), C.var("x_2").scale(3)]


def test_dp_canonical_passes_pd1_pd2():
    C = dp_ring()
    rep = check_pd(DividedPowerGamma(C), dp_elements(C), 4, 4)
    assert rep.ok
    assert not rep.tainted


def test_gamma_two_of_x2():
    C = dp_ring()
    assert DividedPowerGamma(C).gamma(2, C.var("x_2")) == C.var("x_4").scale(3)


@pytest.mark.parametrize("k", range(0, 7))
def test_factorial_times_gamma_is_power(k):
    C = dp_ring()
    g = DividedPowerGamma(C)
    for a in dp_elements(C):
        assert g.gamma(k, a).scale(factorial(k)) == C.power(a, k)
    R = rational_ring()
    g0 = Char0Gamma(R)
    for a in char0_elements(R):
        assert g0.gamma(k, a).scale(factorial(k)) == R.power(a, k)


def test_dp_canonical_rejects():
    C, _ = tensor([c_even(-2, -10).ring, CDGPresentation((Var((0,), "z", -2),), {})])
    g = DividedPowerGamma(C)
    with pytest.raises(PDRejected):
        g.gamma(2, C.var("t1.z"))
    with pytest.raises(PDRejected):
        g.gamma(2, C.var("t0.x_1") + C.var("t1.z"))
    with pytest.raises(PDRejected):
        g.gamma(2, C.var("t0.y"))  # odd


def test_obstruction_witness_for_polynomial_ring():
    x = Var((0,), "x", -2)
    R = CDGPresentation((x,), {})
    wit = pd_obstruction_witness(R, Polynomial.var(x), 2)
    assert wit is not None and wit["k"] == 2 and wit["coefficient"] == 1 and wit["factorial"] == 2


def test_no_witness_in_divided_power_ring():
    C = dp_ring()
    for k in range(1, 7):
        assert pd_obstruction_witness(C, C.var("x_1"), k) is None


def test_table_pd1_violation_located():
    C = c_even(-2, -12).ring
    x1 = C.var("x_1")
    bad = TableGamma(C, {"x_1": {2: C.var("x_2").scale(5), 3: C.var("x_3"), 4: C.var("x_4")}})
    rep = check_pd(bad, [x1], 2, 2)
    assert not rep.ok
    idx = {e.index for e in rep.failures}
    assert ("x_1", "PD1", 1, 1) in idx


def test_table_matching_canonical_passes():
    C = c_even(-2, -30).ring
    x1 = C.var("x_1")
    table = {"x_1": {k: C.var(f"x_{k}") for k in range(2, 9)}}
    assert check_pd(TableGamma(C, table), [x1], 4, 4).ok


def test_table_missing_entry_fails_not_raises():
    C = c_even(-2, -12).ring
    rep = check_pd(TableGamma(C, {"x_1": {}}), [C.var("x_1")], 2, 2)
    assert not rep.ok
    assert any("rejected" in e.detail for e in rep.failures)
