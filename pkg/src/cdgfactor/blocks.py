"""
Building blocks of the factorization.

* ``c_odd(n)``: Z[x, y] with deg x = n odd, deg y = n + 1, dx = y.
* ``c_tilde_even(n, K)``: the free ring on x_1..x_K, y with dx_1 = y,
  dx_i = x_{i-1} y.
* ``c_even(n, floor)``: its quotient by x_i x_j = binom(i+j, j) x_{i+j},
  realized as a rewrite family.

Each block comes with the unit e: Z -> C and the augmentation p: C -> Z
killing all generators, plus an explicit contraction onto Z * 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import NamedTuple

from .complexes import ChainMapWindow, WindowComplex, check_homotopy, expand, unit_complex
from .dg import CDGPresentation, DividedPowerFamily, RingHom, unit_ring
from .graded import ONE, Polynomial, Var
from .lattice import zeros
from .reports import Entry, Report


class OddBlock(NamedTuple):
    ring: CDGPresentation
    e: RingHom
    p: RingHom


class EvenBlock(NamedTuple):
    ring: CDGPresentation
    e: RingHom
    p: RingHom
    family: DividedPowerFamily


def _unit_and_aug(ring: CDGPresentation) -> tuple[RingHom, RingHom]:
    z = unit_ring(ring.coefficients)
    e = RingHom(z, ring, {}, label="e")
    p = RingHom(ring, z, {v: Polynomial() for v in ring.variables}, label="p")
    return e, p


def c_odd(n: int) -> OddBlock:
    if n > -1 or n % 2 == 0:
        raise ValueError(f"c_odd needs an odd n <= -1, got {n}")
    x = Var((1, 0), "x", n)
    y = Var((2, 0), "y", n + 1)
    ring = CDGPresentation((x, y), {x: Polynomial.var(y)}, label=f"C_odd({n})")
    e, p = _unit_and_aug(ring)
    return OddBlock(ring, e, p)


def even_cutoff(n: int, window_floor: int) -> int:
    """Largest K with n*K >= window_floor - 1 (one guard index below the floor)."""
    return max(1, (window_floor - 1) // n)


def _even_vars(n: int, K: int):
    xs = tuple(Var((1, i), f"x_{i}", n * i) for i in range(1, K + 1))
    y = Var((2, 0), "y", n + 1)
    diff = {xs[0]: Polynomial.var(y)}
    for i in range(2, K + 1):
        diff[xs[i - 1]] = Polynomial.var(xs[i - 2]) * Polynomial.var(y)
    return xs, y, diff


def _check_even(n: int):
    if n > -2 or n % 2:
        raise ValueError(f"even block needs an even n <= -2, got {n}")


def c_tilde_even(n: int, K: int) -> CDGPresentation:
    _check_even(n)
    if K < 1:
        raise ValueError("cutoff must be >= 1")
    xs, y, diff = _even_vars(n, K)
    return CDGPresentation(xs + (y,), diff, label=f"C~_even({n}, K={K})")


def c_even(n: int, window_floor: int) -> EvenBlock:
    _check_even(n)
    if window_floor > -1:
        raise ValueError("window_floor must be <= -1")
    K = even_cutoff(n, window_floor)
    xs, y, diff = _even_vars(n, K)
    fam = DividedPowerFamily("x", n, xs, y)
    ring = CDGPresentation(xs + (y,), diff, (fam,), label=f"C_even({n})")
    e, p = _unit_and_aug(ring)
    return EvenBlock(ring, e, p, fam)


def relation(ring: CDGPresentation, i: int, j: int) -> Polynomial:
    """r_{i,j} in a free even block, with the convention x_0 = 1."""
    def x(k):
        return Polynomial.const(1) if k == 0 else ring.var(f"x_{k}")
    return x(i) * x(j) - x(i + j).scale(comb(i + j, j))


def relation_identities(n: int, window_floor: int) -> Report:
    """d(r_{i,j}) = (r_{i-1,j} + r_{i,j-1}) y in the free block, for all
    i, j >= 1 with n (i + j) >= window_floor."""
    K = max(2, window_floor // n)
    ring = c_tilde_even(n, K)
    y = ring.var("y")
    entries = []
    for i in range(1, K):
        for j in range(1, K + 1 - i):
            if n * (i + j) < window_floor:
                continue
            lhs = ring.d(relation(ring, i, j))
            rhs = (relation(ring, i - 1, j) + relation(ring, i, j - 1)) * y
            r = lhs - rhs
            entries.append(Entry("pass" if not r else "fail", degree=n * (i + j) + n + 1, index=(i, j),
                                 detail="" if not r else f"residue {r}"))
    return Report(f"d(r_ij) identities (n={n})", entries)


# contraction --------------------------------------------------------------


@dataclass
class ContractionWitness:
    complex: WindowComplex
    pi: ChainMapWindow
    iota: ChainMapWindow
    h: dict
    h_tainted: dict

    def check(self) -> Report:
        return check_homotopy(self.complex, self.pi, self.iota, self.h, self.h_tainted)


def _h_odd(ring, m):
    x, y = ring["x"], ring["y"]
    exps = dict(m)
    if x in exps:
        return Polynomial()
    j = exps.get(y, 0)
    if j == 0:
        return Polynomial()
    # h(y^j) = x y^(j-1)
    return Polynomial.var(x) * Polynomial.monomial(((y, j - 1),) if j > 1 else ONE)


def _h_even(ring, fam, m):
    y = fam.companion
    xi = [fam.index(v) for v, _ in m if fam.index(v)]
    has_y = any(v == y for v, _ in m)
    if not has_y:
        return Polynomial()
    i = xi[0] if xi else 0
    # h(x_i y) = x_{i+1}, h(y) = x_1
    if i + 1 > fam.cutoff:
        return None
    return Polynomial.var(fam.member(i + 1))


def contraction(block, window_floor: int, cap: int | None = None) -> ContractionWitness:
    """Explicit pi, iota, h with d h + h d = id - iota pi on the window expansion."""
    ring = block.ring
    M = expand(ring, window_floor, cap)
    U = unit_complex(window_floor)
    pi_maps, iota_maps = {}, {}
    for i in M.degrees:
        pi_maps[i] = zeros(U.rank(i), M.rank(i))
        iota_maps[i] = zeros(M.rank(i), U.rank(i))
    k1 = M.index(0)[ONE]
    pi_maps[0][0, k1] = 1
    iota_maps[0][k1, 0] = 1
    pi = ChainMapWindow(M, U, pi_maps, label="pi")
    iota = ChainMapWindow(U, M, iota_maps, label="iota")
    h = {}
    tainted = {i: set() for i in M.degrees}
    for i in M.degrees:
        if i - 1 < M.floor - 1:
            continue
        mat = zeros(M.rank(i - 1), M.rank(i))
        idx = M.index(i - 1)
        for k, m in enumerate(M.basis[i]):
            img = _h_odd(ring, m) if isinstance(block, OddBlock) else _h_even(ring, block.family, m)
            if img is None:
                tainted[i].add(k)
                continue
            for mm, c in img.items():
                r = idx.get(mm)
                if r is None:
                    tainted[i].add(k)
                    continue
                mat[r, k] = c
        h[i] = mat
    return ContractionWitness(M, pi, iota, h, tainted)


def degreewise_ranks(ring: CDGPresentation, window_floor: int, cap=None) -> dict:
    return {i: len(b) for i, b in expand(ring, window_floor, cap).basis.items() if i >= window_floor}


__all__ = [
    "OddBlock", "EvenBlock", "c_odd", "c_even", "c_tilde_even", "even_cutoff",
    "relation", "relation_identities", "ContractionWitness", "contraction", "degreewise_ranks",
]
