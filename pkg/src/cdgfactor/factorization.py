"""
Factor a quasi-isomorphism f: A -> B of CDG rings, B with a divided power
structure, as A --e--> B~ --f~--> B with p: B~ -> A splitting e.

Construction: pick elements b_s of B^n whose classes generate W^n(B); attach
an odd block (dx = y) for odd n or a divided-power block for even n, mapping
x to b_s (resp. x_i to gamma^i(b_s)) and y to d(b_s); tensor all blocks
into C and set B~ = A (x) C.  Verification follows the surjectivity chase
W -> B -> H -> Z -> full degree, each step computed on lattices.
"""

from __future__ import annotations

import logging
from math import comb
from dataclasses import dataclass, field

from . import lattice
from .blocks import c_even, c_odd
from .complexes import (W, W_map, B_map, Z_map, H_map_status, WindowComplex,
                        check_chain_map, check_quasi_iso, check_surjective, expand, hom_window)
from .dg import (CDGPresentation, RingHom, check_hom_is_dg, same_ring, homs_agree, identity_hom,
                 induced_hom, tensor, unit_ring)
from .graded import Polynomial, format_polynomial
from .lattice import zeros
from .pd import PDOracle, PDRejected
from .reports import Entry, Report

log = logging.getLogger(__name__)


class FactorizationError(ValueError):
    pass


@dataclass
class FactorizationInput:
    A: CDGPresentation
    B: CDGPresentation
    f: RingHom
    pd: PDOracle
    floor: int = -10
    caps: object = None
    minimize: bool = False

    def __post_init__(self):
        if self.floor > -2:
            raise FactorizationError("window floor must be <= -2")
        if self.f.source is not self.A or self.f.target is not self.B:
            if not (same_ring(self.f.source, self.A) and same_ring(self.f.target, self.B)):
                raise FactorizationError("f must be a hom from A to B")
            self.f = RingHom(self.A, self.B, dict(self.f.images), label="f")
        elif self.f.label != "f":
            self.f = RingHom(self.A, self.B, dict(self.f.images), label="f")
        if not same_ring(self.pd.ring, self.B):
            raise FactorizationError("the PD oracle must be defined on B")
        for v in self.A.variables:
            if v.degree > -1:
                raise FactorizationError(
                    f"A-variable {v.name} has degree {v.degree}; A^0 is pinned to Z, so A-variables need degree <= -1")
        for v in self.B.variables:
            if v.degree == 0 and self.caps is None:
                raise FactorizationError(f"B-variable {v.name} has degree 0 and no cap was given")
        if self.A.coefficients != "Z" or self.B.coefficients != "Z":
            raise FactorizationError("the factorization works over Z")


@dataclass
class GeneratorSelection:
    """Per degree n, the chosen b_s in B^n (classes generate W^n(B))."""

    by_degree: dict
    report: Report

    def items(self):
        for n in sorted(self.by_degree, reverse=True):
            for j, b in enumerate(self.by_degree[n]):
                yield n, j, b

    def __len__(self):
        return sum(len(v) for v in self.by_degree.values())


@dataclass
class BlockBuild:
    name: str
    n: int
    b: Polynomial
    block: object
    g: RingHom
    report: Report


@dataclass
class FactorizationResult:
    input: FactorizationInput
    selection: GeneratorSelection
    blocks: list
    C: CDGPresentation
    g_C: RingHom
    e_C: RingHom
    p_C: RingHom
    Btilde: CDGPresentation
    e: RingHom
    p: RingHom
    ftilde: RingHom
    reports: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports.values())


def _window(inp: FactorizationInput, ring: CDGPresentation) -> WindowComplex:
    return expand(ring, inp.floor, inp.caps)


def select_generators(inp: FactorizationInput, MB: WindowComplex | None = None) -> GeneratorSelection:
    """Step 1: all non-cocycle monomials of B^n, n in [floor, -1]."""
    MB = MB or _window(inp, inp.B)
    chosen = {}
    entries = []
    for n in range(inp.floor, 0):
        d = MB.d(n)
        cols = [k for k in range(MB.rank(n)) if any(x != 0 for x in d[:, k])]
        w = W(MB, n)

        def generates(ks):
            g = w.proj[:, ks] if ks else zeros(w.rank, 0)
            return lattice.is_surjective(g.reshape(w.rank, len(ks)))

        if inp.minimize:
            keep = list(cols)
            for k in cols:
                trial = [c for c in keep if c != k]
                if generates(trial):
                    keep = trial
            cols = keep
        ok = generates(cols)
        chosen[n] = [Polynomial.monomial(MB.basis[n][k]) for k in cols]
        entries.append(Entry("pass" if ok else "fail", degree=n, invariants=[w.rank, len(cols)],
                             cap_tainted=MB.tainted(n + 1) and not ok,
                             detail=f"rank W = {w.rank}, {len(cols)} generators"))
    return GeneratorSelection(chosen, Report("generators_span_W", entries))


def build_block_odd(n: int, b: Polynomial, B: CDGPresentation, name: str = "") -> BlockBuild:
    """Step 2: C_s = Z[x, y], g_s(x) = b, g_s(y) = d b."""
    if n % 2 == 0 or n > -1:
        raise FactorizationError(f"odd block needs odd n <= -1, got {n}")
    if b and b.degree() != n:
        raise FactorizationError(f"generator {b} does not have degree {n}")
    blk = c_odd(n)
    C = blk.ring
    g = RingHom(C, B, {C["x"]: b, C["y"]: B.d(b)}, label=f"g[{name}]")
    rep = check_hom_is_dg(g)
    rep.check = f"block[{name}]"
    return BlockBuild(name, n, b, blk, g, rep)


def build_block_even(n: int, b: Polynomial, B: CDGPresentation, pd: PDOracle,
                     floor: int, name: str = "") -> BlockBuild:
    """Step 3: the divided-power block, g_s(x_i) = gamma^i(b), g_s(y) = d b.

    Well-definedness on the quotient is exactly (PD1): g(r_{i,j}) = 0.
    """
    if n % 2 or n > -2:
        raise FactorizationError(f"even block needs even n <= -2, got {n}")
    if b and b.degree() != n:
        raise FactorizationError(f"generator {b} does not have degree {n}")
    blk = c_even(n, floor)
    C, fam = blk.ring, blk.family
    try:
        gammas = {i: pd.gamma(i, b) for i in range(fam.cutoff + 1)}
    except PDRejected as exc:
        raise FactorizationError(f"PD oracle rejected generator {b} in degree {n}: {exc}") from exc
    images = {fam.member(i): gammas[i] for i in range(1, fam.cutoff + 1)}
    images[fam.companion] = B.d(b)
    g = RingHom(C, B, images, label=f"g[{name}]")
    entries = []
    for i in range(1, fam.cutoff + 1):
        for j in range(1, fam.cutoff + 1 - i):
            if j < i:
                continue
            r = B.mul(gammas[i], gammas[j]) - gammas[i + j].scale(comb(i + j, j))
            entries.append(Entry("pass" if not r else "fail", degree=n * (i + j), index=(name, "PD1", i, j),
                                 detail="" if not r else f"g(r_{{{i},{j}}}) = {format_polynomial(r)}"))
    dg = check_hom_is_dg(g)
    rep = Report(f"block[{name}]", entries + dg.entries)
    return BlockBuild(name, n, b, blk, g, rep)


def assemble_C(blocks: list, B: CDGPresentation):
    """Step 4: C = tensor of all blocks, with g_C, e_C, p_C."""
    rings = [bl.block.ring for bl in blocks]
    C, incl = tensor(rings, [f"{bl.name}." for bl in blocks], label="C")
    g_C = induced_hom(C, B, [bl.g for bl in blocks], incl, label="g_C")
    Z = unit_ring(C.coefficients)
    e_C = RingHom(Z, C, {}, label="e_C")
    p_C = RingHom(C, Z, {v: Polynomial() for v in C.variables}, label="p_C")
    return C, g_C, e_C, p_C


def assemble_result(inp: FactorizationInput, selection: GeneratorSelection, blocks: list,
                    C, g_C, e_C, p_C) -> FactorizationResult:
    """Step 5: B~ = A (x) C, e = id (x) e_C, p = id (x) p_C, f~ = f (x) g_C."""
    A = inp.A
    try:
        Bt, (iA, iC) = tensor([A, C], ["", ""], label="B~")
    except ValueError as exc:
        raise FactorizationError(f"cannot form A (x) C: {exc}") from exc
    e = RingHom(A, Bt, dict(iA.images), label="e")
    p_images, f_images = {}, {}
    for v in A.variables:
        (w,) = iA.images[v].variables()
        p_images[w] = Polynomial.var(v)
        f_images[w] = inp.f.images[v]
    for v in C.variables:
        (w,) = iC.images[v].variables()
        p_images[w] = Polynomial()
        f_images[w] = g_C.images[v]
    p = RingHom(Bt, A, p_images, label="p")
    ft = RingHom(Bt, inp.B, f_images, label="f~")
    res = FactorizationResult(inp, selection, blocks, C, g_C, e_C, p_C, Bt, e, p, ft)
    res.reports["split_identity"] = homs_agree(p.compose(e), identity_hom(A), "split_identity p.e = id_A")
    res.reports["commutativity"] = homs_agree(ft.compose(e), inp.f, "commutativity f~.e = f")
    res.reports["split_identity_C"] = homs_agree(p_C.compose(e_C), identity_hom(e_C.source), "p_C.e_C = id_Z")
    return res


def _per_degree(name: str, lo: int, hi: int, fn, tainted) -> Report:
    entries = []
    for i in range(lo, hi + 1):
        ok, inv = fn(i)
        entries.append(Entry("pass" if ok else "fail", degree=i, invariants=inv,
                             cap_tainted=tainted(i) and not ok))
    return Report(name, entries)


def _surj(mat) -> tuple[bool, list]:
    free, tors = lattice.cokernel(mat)
    return free == 0 and not tors, [free, *tors]


def verify_factorization(res: FactorizationResult) -> dict:
    """Step 6 and the quasi-isomorphism claims, computed on the window."""
    inp = res.input
    floor = inp.floor
    MA, MB, MBt = _window(inp, inp.A), _window(inp, inp.B), _window(inp, res.Btilde)
    fw = hom_window(inp.f, MA, MB)
    ew = hom_window(res.e, MA, MBt)
    pw = hom_window(res.p, MBt, MA)
    ftw = hom_window(res.ftilde, MBt, MB)
    out = {}
    for phi in (inp.f, res.e, res.p, res.ftilde):
        out[f"dg[{phi.label}]"] = check_hom_is_dg(phi)
    for w in (fw, ew, pw, ftw):
        out[f"chain_map[{w.label}]"] = check_chain_map(w)
    out["f_quasi_iso"] = check_quasi_iso(fw)
    out["semi_free"] = _semi_free_report(res, MA, MBt)
    t = ftw.tainted
    out["chase_W"] = _per_degree("W^i(f~) surjective", floor, -1, lambda i: _surj(W_map(ftw, i)), t)
    w0 = W(MB, 0).rank
    out["chase_W0"] = Report("W^0(B) = 0", [Entry("pass" if w0 == 0 else "fail", degree=0, invariants=[w0])])
    out["chase_B"] = _per_degree("B^i(f~) surjective", floor + 1, 0, lambda i: _surj(B_map(ftw, i)), t)

    def hbij(i):
        inj, surj = H_map_status(ftw, i)
        return inj and surj, [int(inj), int(surj)]

    out["chase_H"] = _per_degree("H^i(f~) bijective", floor + 1, 0, hbij, t)
    out["chase_Z"] = _per_degree("Z^i(f~) surjective", floor + 1, 0, lambda i: _surj(Z_map(ftw, i)), t)

    def chase_full(i):
        # Z^i and W^i surjective with exact rows force f~^i surjective
        z_ok = out["chase_Z"].entries[i - floor - 1].passed
        w_ok = True if i == 0 else out["chase_W"].entries[i - floor].passed
        return z_ok and w_ok, None

    out["chase_full"] = _per_degree("f~^i surjective (by the chase)", floor + 1, 0, chase_full, t)
    out["surjective"] = check_surjective(ftw)
    out["quasi_iso_e"] = check_quasi_iso(ew)
    out["quasi_iso_p"] = check_quasi_iso(pw)
    out["quasi_iso_f~"] = check_quasi_iso(ftw)
    res.reports.update(out)
    return out


def _semi_free_report(res, MA: WindowComplex, MBt: WindowComplex) -> Report:
    """B~ is free over A on the normal-form monomials of C: degreewise ranks
    of B~ are the convolution of those of A and C."""
    MC = expand(res.C, res.input.floor, res.input.caps)
    entries = []
    for i in range(MBt.floor - 1, 1):
        conv = sum(MA.rank(j) * MC.rank(i - j) for j in range(i, 1) if i - j >= MC.floor - 1)
        entries.append(Entry("pass" if conv == MBt.rank(i) else "fail", degree=i,
                             invariants=[MBt.rank(i), conv]))
    return Report("semi_free_over_A", entries)


def factorize(inp: FactorizationInput, verify: bool = True) -> FactorizationResult:
    MB = _window(inp, inp.B)
    selection = select_generators(inp, MB)
    blocks = []
    for n, j, b in selection.items():
        name = f"s{-n}_{j}"
        if n % 2:
            blocks.append(build_block_odd(n, b, inp.B, name))
        else:
            blocks.append(build_block_even(n, b, inp.B, inp.pd, inp.floor, name))
    log.info("selected %d generators", len(blocks))
    C, g_C, e_C, p_C = assemble_C(blocks, inp.B)
    res = assemble_result(inp, selection, blocks, C, g_C, e_C, p_C)
    res.reports["generators"] = selection.report
    for bl in blocks:
        res.reports[bl.report.check] = bl.report
    if not verify:
        return res
    if not all(r.ok for r in res.reports.values()):
        res.reports["verification"] = Report(
            "verification", [Entry("fail", detail="skipped: construction checks failed")])
        return res
    verify_factorization(res)
    return res


__all__ = [
    "FactorizationInput", "GeneratorSelection", "BlockBuild", "FactorizationResult",
    "FactorizationError", "select_generators", "build_block_odd", "build_block_even",
    "assemble_C", "assemble_result", "verify_factorization", "factorize",
]
