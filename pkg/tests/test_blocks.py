import pytest

from cdgfactor.blocks import (c_even, c_odd, c_tilde_even, contraction, degreewise_ranks, even_cutoff,
                              relation_identities)
from cdgfactor.complexes import check_quasi_iso, cohomology_table, expand, hom_window
from cdgfactor.dg import check_d_squared, check_hom_is_dg, homs_agree, identity_hom
from cdgfactor.graded import ONE, Polynomial

from conftest import brute_force_basis


@pytest.mark.parametrize("n", [0, 2, -2, 1])
def test_c_odd_rejects(n):
    with pytest.raises(ValueError):
        c_odd(n)


@pytest.mark.parametrize("n", [-1, -3, 0, 2])
def test_c_even_rejects(n):
    with pytest.raises(ValueError):
        c_even(n, -10)


def test_c_odd_structure():
    blk = c_odd(-3)
    C = blk.ring
    assert (C["x"].degree, C["y"].degree) == (-3, -2)
    assert C.d(C.var("x") * C.var("y")) == C.var("y") * C.var("y")
    assert check_d_squared(C).ok
    assert check_hom_is_dg(blk.e).ok and check_hom_is_dg(blk.p).ok
    assert homs_agree(blk.p.compose(blk.e), identity_hom(blk.e.source), "p.e").ok


def test_c_even_structure():
    blk = c_even(-2, -12)
    C = blk.ring
    assert blk.family.cutoff == even_cutoff(-2, -12) == 6
    y = C.var("y")
    for i in range(1, 6):
        xi = C.var(f"x_{i}")
        prev = Polynomial.const(1) if i == 1 else C.var(f"x_{i - 1}")
        assert C.d(xi) == C.mul(prev, y)
        assert C.d(C.mul(xi, y)) == Polynomial()
    assert C.mul(y, y) == Polynomial()


def test_cutoff_has_one_guard_index():
    for n in (-2, -4, -6):
        for floor in (-5, -10, -12):
            K = even_cutoff(n, floor)
            assert n * K >= floor - 1 or K == 1
            assert n * (K + 1) < floor - 1


def test_c_tilde_is_free():
    C = c_tilde_even(-2, 4)
    assert not C.families
    assert C.mul(C.var("x_1"), C.var("x_1")) == Polynomial.monomial(((C["x_1"], 2),))


@pytest.mark.parametrize("n", [-2, -4])
def test_relation_identity_table(n):
    rep = relation_identities(n, -12)
    assert rep.ok
    pairs = {e.index for e in rep.entries}
    assert pairs == {(i, j) for i in range(1, 13) for j in range(1, 13) if n * (i + j) >= -12}


def test_c_even_rank_one_everywhere():
    ranks = degreewise_ranks(c_even(-2, -12).ring, -12)
    assert set(ranks.values()) == {1}
    brute = brute_force_basis(c_even(-2, -12).ring, -12)
    assert {i: len(b) for i, b in brute.items()} == ranks


def test_c_odd_minus_three_rank_table():
    ranks = degreewise_ranks(c_odd(-3).ring, -8)
    assert ranks == {0: 1, -1: 0, -2: 1, -3: 1, -4: 1, -5: 1, -6: 1, -7: 1, -8: 1}


# contractions --------------------------------------------------------------------


def _col(M, i, mono):
    return M.index(i)[mono]


def test_odd_hand_oracle_on_y():
    blk = c_odd(-3)
    wit = contraction(blk, -8)
    M = wit.complex
    x, y = blk.ring["x"], blk.ring["y"]
    k = _col(M, -2, ((y, 1),))
    # h(y) = x
    assert wit.h[-2][_col(M, -3, ((x, 1),)), k] == 1
    assert wit.check().ok


def test_even_hand_oracle_on_x1():
    blk = c_even(-2, -8)
    wit = contraction(blk, -8)
    M = wit.complex
    x1 = blk.ring["x_1"]
    # h(x_1) = 0 and h(d x_1) = h(y) = x_1
    assert not wit.h[-2][:, _col(M, -2, ((x1, 1),))].any()
    y = blk.ring["y"]
    assert wit.h[-1][_col(M, -2, ((x1, 1),)), _col(M, -1, ((y, 1),))] == 1


def test_unit_is_fixed():
    wit = contraction(c_odd(-3), -8)
    k1 = wit.complex.index(0)[ONE]
    assert wit.pi[0][0, k1] == 1 and wit.iota[0][k1, 0] == 1


@pytest.mark.parametrize("n,cap", [(-1, 6), (-3, None), (-5, None)])
def test_odd_contraction_window_ten(n, cap):
    wit = contraction(c_odd(n), -10, None if cap is None else {"*": cap})
    assert wit.check().ok


def test_odd_minus_one_taint_is_only_at_cap():
    wit = contraction(c_odd(-1), -10, {"*": 6})
    rep = wit.check()
    assert rep.ok
    assert all(e.degree == -1 for e in rep.tainted)


@pytest.mark.parametrize("n", [-2, -4])
def test_even_cohomology_window_twelve(n):
    blk = c_even(n, -12)
    M = expand(blk.ring, -12)
    table = cohomology_table(M)
    assert str(table[0]) == "Z"
    assert all(table[i].is_zero for i in range(-11, 0))
    Z = blk.e.source
    assert check_quasi_iso(hom_window(blk.e, expand(Z, -12), M)).ok
