import pytest

from cdgfactor.blocks import c_even, c_odd
from cdgfactor.complexes import check_surjective, expand, hom_window
from cdgfactor.dg import CDGPresentation, DividedPowerFamily, RingHom, identity_hom, tensor, unit_ring
from cdgfactor.factorization import (FactorizationError, FactorizationInput, GeneratorSelection,
                                     assemble_C, assemble_result, build_block_even, build_block_odd,
                                     factorize, select_generators, verify_factorization)
from cdgfactor.graded import Polynomial, Var
from cdgfactor.pd import DividedPowerGamma, TableGamma


def acceptance_input(floor=-12):
    blk = c_even(-2, floor)
    return FactorizationInput(blk.e.source, blk.ring, blk.e, DividedPowerGamma(blk.ring), floor)


@pytest.fixture(scope="module")
def acceptance():
    return factorize(acceptance_input())


def test_acceptance_all_green(acceptance):
    bad = {k: r.render() for k, r in acceptance.reports.items() if not r.ok}
    assert not bad


def test_acceptance_generators(acceptance):
    assert [b.name for b in acceptance.blocks] == ["s2_0", "s4_0", "s6_0", "s8_0", "s10_0", "s12_0"]
    B = acceptance.input.B
    assert [str(b.b) for b in acceptance.blocks] == [str(B.var(f"x_{i}")) for i in range(1, 7)]


def test_acceptance_reports_cover_window(acceptance):
    r = acceptance.reports
    assert [e.degree for e in r["surjective"].entries] == list(range(-11, 1))
    for key in ("quasi_iso_e", "quasi_iso_p", "quasi_iso_f~"):
        assert [e.degree for e in r[key].entries] == list(range(-10, 1))
    assert [e.degree for e in r["chase_W"].entries] == list(range(-12, 0))
    for key in ("chase_B", "chase_H", "chase_Z", "chase_full"):
        assert [e.degree for e in r[key].entries] == list(range(-11, 1))


def test_acceptance_surjectivity_cross_checked_directly(acceptance):
    # independent of the chase: cokernel of f~ in each degree
    floor = acceptance.input.floor
    ftw = hom_window(acceptance.ftilde, expand(acceptance.Btilde, floor), expand(acceptance.input.B, floor))
    assert check_surjective(ftw).ok


def test_split_and_commutativity_are_symbolic(acceptance):
    res = acceptance
    pe = res.p.compose(res.e)
    for v in res.input.A.variables:
        assert pe.images[v] == Polynomial.var(v)
    fe = res.ftilde.compose(res.e)
    for v in res.input.A.variables:
        assert fe.images[v] == res.input.f.images[v]


def test_trivial_input():
    Z = unit_ring()
    res = factorize(FactorizationInput(Z, Z, identity_hom(Z), DividedPowerGamma(Z), -6))
    assert res.ok
    assert res.blocks == [] and res.Btilde.variables == ()
    assert res.e.images == {} and res.p.images == {} and res.ftilde.images == {}


def test_inclusion_with_odd_generators():
    a = Var((0,), "a", -3)
    A = CDGPresentation((a,), {}, label="A")
    B, (iA, _) = tensor([A, c_even(-2, -10).ring], ["", ""])
    res = factorize(FactorizationInput(A, B, iA, DividedPowerGamma(B), -10))
    assert res.ok, [k for k, r in res.reports.items() if not r.ok]
    assert any(b.n % 2 for b in res.blocks)


def test_torsion_cohomology_identity():
    vs = tuple(Var((1, i), f"v_{i}", -2 * i) for i in range(1, 8))
    u = Var((2, 0), "u", -3)
    B = CDGPresentation(vs + (u,), {u: Polynomial.var(vs[0])}, (DividedPowerFamily("v", -2, vs),))
    res = factorize(FactorizationInput(B, B, identity_hom(B), DividedPowerGamma(B), -12))
    assert res.ok
    tors = {e.degree: e.invariants for e in res.reports["quasi_iso_f~"].entries if e.invariants[1:]}
    assert tors == {-4: [0, 2], -6: [0, 3], -8: [0, 4], -10: [0, 5]}


def test_minimize_keeps_green_and_shrinks():
    # in degree -5, d(a.x b.y) and d(a.y b.x) agree up to sign: one is redundant
    B, _ = tensor([c_odd(-3).ring, c_odd(-3).ring], ["a.", "b."])
    e = RingHom(unit_ring(), B, {})
    full = factorize(FactorizationInput(e.source, B, e, DividedPowerGamma(B), -5))
    mini = factorize(FactorizationInput(e.source, B, e, DividedPowerGamma(B), -5, minimize=True))
    assert full.ok and mini.ok
    assert len(full.selection) == 6 and len(mini.selection) == 5


# negative controls ------------------------------------------------------------------


def test_pd1_violating_table_fails_at_block():
    blk = c_even(-2, -6)
    C = blk.ring
    table = TableGamma(C, {"x_1": {2: C.var("x_2").scale(5), 3: C.var("x_3")}, "x_2": {}, "x_3": {}})
    res = factorize(FactorizationInput(blk.e.source, C, blk.e, table, -6))
    assert not res.ok
    bad = res.reports["block[s2_0]"].failures
    assert ("s2_0", "PD1", 1, 1) in [e.index for e in bad]
    assert "verification" in res.reports


def test_non_surjective_variant_is_located():
    floor = -10
    inp = acceptance_input(floor)
    sel = select_generators(inp)
    doubled = {n: list(bs) for n, bs in sel.by_degree.items()}
    doubled[-2] = [b.scale(2) for b in doubled[-2]]
    sel2 = GeneratorSelection(doubled, sel.report)
    blocks = []
    for n, j, b in sel2.items():
        name = f"s{-n}_{j}"
        blocks.append(build_block_odd(n, b, inp.B, name) if n % 2
                      else build_block_even(n, b, inp.B, inp.pd, floor, name))
    assert all(bl.report.ok for bl in blocks)  # still DG and PD-consistent
    res = assemble_result(inp, sel2, blocks, *assemble_C(blocks, inp.B))
    verify_factorization(res)
    surj = res.reports["surjective"]
    assert not surj.ok
    bad = {e.degree: e.invariants for e in surj.failures}
    assert bad[-2] == [0, 2]
    assert -2 in [e.degree for e in res.reports["chase_W"].failures]


def test_input_validation():
    blk = c_even(-2, -10)
    Z = blk.e.source
    pd = DividedPowerGamma(blk.ring)
    with pytest.raises(FactorizationError):
        FactorizationInput(Z, blk.ring, blk.e, pd, -1)
    B0 = c_odd(-1).ring  # degree-0 variable, no caps
    with pytest.raises(FactorizationError):
        FactorizationInput(unit_ring(), B0, c_odd(-1).e, DividedPowerGamma(B0), -6)
    t = Var((0,), "t", 0)
    A0 = CDGPresentation((t,), {})
    with pytest.raises(FactorizationError):
        FactorizationInput(A0, A0, identity_hom(A0), DividedPowerGamma(A0), -6, caps=3)
    with pytest.raises(FactorizationError):
        FactorizationInput(Z, Z, blk.e, DividedPowerGamma(Z), -6)  # f lands in C, not Z
    with pytest.raises(FactorizationError):
        FactorizationInput(Z, blk.ring, blk.e, DividedPowerGamma(c_even(-4, -10).ring), -6)
