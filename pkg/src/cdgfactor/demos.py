"""Named constructions with their full verification suites, as used by ``cdgfactor demo``."""

from __future__ import annotations

from dataclasses import dataclass, field

from .blocks import c_even, c_odd, contraction, relation_identities
from .complexes import (check_d_squared_window, check_exact_sequences, check_quasi_iso,
                        cohomology_table, expand, hom_window, unit_complex)
from .dg import CDGPresentation, check_d_squared, check_hom_is_dg, homs_agree, identity_hom
from .factorization import FactorizationInput, factorize
from .graded import Polynomial, Var
from .io import factorization_input_to_json, hom_to_json, result_to_json, ring_to_json
from .pd import DividedPowerGamma, pd_obstruction_witness
from .reports import Entry, Report

DEMOS = ("lemma100", "lemma101", "counterexample", "factorization")


class DemoUsageError(ValueError):
    pass


@dataclass
class DemoRun:
    name: str
    documents: dict = field(default_factory=dict)  # file stem -> JSON document
    reports: list = field(default_factory=list)
    summary: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)


def _cohomology_report(M, expected: dict | None = None) -> tuple[Report, dict]:
    table = cohomology_table(M)
    entries = []
    for i, grp in sorted(table.items(), reverse=True):
        want = expected.get(i) if expected else None
        ok = want is None or str(grp) == want
        entries.append(Entry("pass" if ok else "fail", degree=i, invariants=grp.to_json(),
                             cap_tainted=M.tainted(i) and not ok,
                             detail=str(grp) if ok else f"H = {grp}, expected {want}"))
    return Report("cohomology", entries), table


def _block_suite(run: DemoRun, block, floor: int, caps):
    ring = block.ring
    Z = block.e.source
    run.documents["ring"] = ring_to_json(ring)
    run.documents["e"] = hom_to_json(block.e)
    run.documents["p"] = hom_to_json(block.p)
    run.reports.append(check_d_squared(ring))
    run.reports.append(check_hom_is_dg(block.e))
    run.reports.append(check_hom_is_dg(block.p))
    run.reports.append(homs_agree(block.p.compose(block.e), identity_hom(Z), "p.e = id"))
    wit = contraction(block, floor, caps)
    M = wit.complex
    run.reports.append(check_d_squared_window(M))
    run.reports.append(wit.check())
    U = unit_complex(floor)
    run.reports.append(check_quasi_iso(hom_window(block.e, expand(Z, floor), M)))
    run.reports.append(check_quasi_iso(hom_window(block.p, M, U)))
    expected = {i: ("Z" if i == 0 else "0") for i in range(floor + 1, 1)}
    rep, table = _cohomology_report(M, expected)
    run.reports.append(rep)
    run.reports.append(check_exact_sequences(M))
    run.summary.append("ranks: " + ", ".join(f"{i}:{M.rank(i)}" for i in range(0, floor - 1, -1)))
    run.summary.append("H: " + ", ".join(f"H^{i}={g}" for i, g in sorted(table.items(), reverse=True)))
    return M


def demo_lemma100(n: int, floor: int = -10, cap: int = 6) -> DemoRun:
    if n % 2 == 0 or n > -1:
        raise DemoUsageError(f"lemma100 needs an odd n <= -1, got {n}")
    run = DemoRun("lemma100")
    _block_suite(run, c_odd(n), floor, {"*": cap})
    return run


def demo_lemma101(n: int, floor: int = -10, cap: int = 6) -> DemoRun:
    if n % 2 or n > -2:
        raise DemoUsageError(f"lemma101 needs an even n <= -2, got {n}")
    run = DemoRun("lemma101")
    block = c_even(n, floor)
    ring = block.ring
    M = _block_suite(run, block, floor, {"*": cap})
    ident = relation_identities(n, floor)
    run.reports.append(ident)
    run.summary.append("d(r_ij) = (r_{i-1,j} + r_{i,j-1}) y: "
                       + ", ".join(f"({e.index[0]},{e.index[1]}) {e.verdict}" for e in ident.entries))
    # x_1^2 = 2 x_2, and the x_i are free basis vectors of the expansion
    entries = []
    if block.family.cutoff >= 2:
        r = ring.mul(ring.var("x_1"), ring.var("x_1")) - ring.var("x_2").scale(2)
        entries.append(Entry("pass" if not r else "fail", degree=2 * n, index="x_1^2 = 2 x_2",
                             detail="" if not r else f"residue {r}"))
    for i in range(1, block.family.cutoff + 1):
        deg = n * i
        if deg < floor:
            break
        v = block.family.member(i)
        ok = ((v, 1),) in M.index(deg)
        entries.append(Entry("pass" if ok else "fail", degree=deg, index=v.name,
                             detail="" if ok else f"{v.name} is not a basis vector"))
    run.reports.append(Report("divided powers are independent", entries))
    return run


def demo_counterexample(n: int = -2, floor: int = -10, cap: int = 6) -> DemoRun:
    if n % 2 or n > -2:
        raise DemoUsageError(f"counterexample needs an even n <= -2, got {n}")
    run = DemoRun("counterexample")
    x = Var((0,), "x", n)
    ring = CDGPresentation((x,), {}, label=f"Z[x], deg x = {n}")
    run.documents["ring"] = ring_to_json(ring)
    wit = pd_obstruction_witness(ring, Polynomial.var(x), 2)
    if wit is None:
        run.reports.append(Report("pd_obstruction", [Entry("fail", degree=2 * n, detail="no witness at k = 2")]))
    else:
        run.documents["witness"] = wit
        run.reports.append(Report("pd_obstruction", [Entry(
            "pass", degree=2 * n, index=wit["monomial"],
            detail=f"x^2 has coefficient {wit['coefficient']}, not divisible by 2! = {wit['factorial']}; "
                   "a PD structure would force x^2 = 2 gamma^2(x)")]))
        run.summary.append(f"no PD structure on Z[x]: coefficient of {wit['monomial']} in x^2 is "
                           f"{wit['coefficient']}, not a multiple of 2")
    return run


def demo_factorization(n: int = -2, floor: int = -10, cap: int = 6, minimize: bool = False) -> DemoRun:
    if n % 2 or n > -2:
        raise DemoUsageError(f"factorization needs an even n <= -2, got {n}")
    run = DemoRun("factorization")
    Bblock = c_even(n, floor)
    f = Bblock.e
    inp = FactorizationInput(f.source, Bblock.ring, f, DividedPowerGamma(Bblock.ring), floor, None, minimize)
    run.documents["input"] = factorization_input_to_json(inp)
    res = factorize(inp)
    run.documents["result"] = result_to_json(res)
    run.reports.extend(res.reports.values())
    run.summary.append(f"{len(res.blocks)} blocks: " + ", ".join(b.name for b in res.blocks))
    return run


def run_demo(name: str, n: int | None, floor: int = -10, cap: int = 6, minimize: bool = False) -> DemoRun:
    if name == "lemma100":
        return demo_lemma100(-3 if n is None else n, floor, cap)
    if name == "lemma101":
        return demo_lemma101(-2 if n is None else n, floor, cap)
    if name == "counterexample":
        return demo_counterexample(-2 if n is None else n, floor, cap)
    if name == "factorization":
        return demo_factorization(-2 if n is None else n, floor, cap, minimize)
    raise DemoUsageError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
