"""
Degree-window expansion of DG rings into integer matrices, the functors
B^i, Z^i, W^i, H^i, and checks on chain maps (quasi-isomorphism,
surjectivity, homotopy, exactness).

A window with floor ``d_min`` stores degrees ``d_min - 1 .. 0``; the extra
degree is a guard band so that coboundaries are exact from ``d_min`` up.
Cohomology is reported from ``d_min + 1`` and maps on cohomology from
``d_min + 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping

import numpy as np

from . import lattice
from .dg import CDGPresentation, RingHom
from .graded import ONE, Monomial, Polynomial, monomial_sort_key, format_monomial
from .lattice import SNFResult, matmul, zeros
from .reports import Entry, Report


class InsufficientWindow(ValueError):
    pass


class CapError(ValueError):
    pass


@dataclass(eq=False)
class WindowComplex:
    """Degreewise free Z-modules with integer differential matrices.

    ``diff[i]`` has shape (rank(i+1), rank(i)).  ``leaky[i]`` holds indices
    of degree-i basis elements whose differential lost terms to an exponent cap.
    """

    floor: int
    basis: dict
    diff: dict
    leaky: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)

    def __post_init__(self):
        for i in self.degrees:
            self.basis.setdefault(i, [])
            self.leaky.setdefault(i, set())
            if len(set(self.basis[i])) != len(self.basis[i]):
                raise ValueError(f"duplicate basis labels in degree {i}")
        for i in self.degrees:
            shape = (self.rank(i + 1), self.rank(i))
            mat = self.diff.get(i)
            if mat is None:
                mat = zeros(*shape)
            mat = np.array(mat, dtype=object).reshape(shape)
            self.diff[i] = mat
        self._snf: dict[int, SNFResult] = {}
        self._index = {i: {b: k for k, b in enumerate(self.basis[i])} for i in self.degrees}

    @property
    def degrees(self) -> range:
        return range(self.floor - 1, 1)

    def rank(self, i: int) -> int:
        if i > 0:
            return 0
        return len(self.basis.get(i, ()))

    def index(self, i: int) -> dict:
        return self._index[i]

    def d(self, i: int) -> np.ndarray:
        if i < self.floor - 1:
            raise InsufficientWindow(f"d^{i} is below the window (floor {self.floor})")
        if i >= 0:
            return zeros(0, self.rank(i))
        return self.diff[i]

    def snf(self, i: int) -> SNFResult:
        if i not in self._snf:
            self._snf[i] = lattice.smith_normal_form(self.d(i))
        return self._snf[i]

    def tainted(self, i: int) -> bool:
        """Whether a cap may have altered Z^i or B^i."""
        return bool(self.leaky.get(i) or self.leaky.get(i - 1))

    def ranks(self) -> dict:
        return {i: self.rank(i) for i in self.degrees}

    @classmethod
    def from_matrices(cls, floor: int, ranks: Mapping[int, int], diff: Mapping[int, list]) -> "WindowComplex":
        basis = {i: [f"e{i}_{k}" for k in range(ranks.get(i, 0))] for i in range(floor - 1, 1)}
        mats = {}
        for i, rows in diff.items():
            shape = (ranks.get(i + 1, 0), ranks.get(i, 0))
            mats[i] = lattice.imatrix(rows, shape).reshape(shape)
        return cls(floor, basis, mats)

    def permuted(self, perms: Mapping[int, list]) -> "WindowComplex":
        """Same complex with basis of degree i reordered by ``perms[i]``."""
        basis = {i: [self.basis[i][k] for k in perms.get(i, range(self.rank(i)))] for i in self.degrees}
        diff = {}
        for i in self.degrees:
            if i >= 0:
                continue
            rows = perms.get(i + 1, list(range(self.rank(i + 1))))
            cols = perms.get(i, list(range(self.rank(i))))
            diff[i] = self.diff[i][np.ix_(rows, cols)] if rows and cols else zeros(len(rows), len(cols))
        return WindowComplex(self.floor, basis, diff)


# expansion --------------------------------------------------------------


def _cap_for(v, caps) -> int | None:
    if caps is None:
        return None
    if isinstance(caps, int):
        return caps
    return caps.get(v.name, caps.get("*"))


def enumerate_monomials(ring: CDGPresentation, lo: int, caps=None) -> dict[int, list]:
    """Normal-form monomials of degree lo..0, grouped by degree."""
    plan = []
    for v in ring.variables:
        if v.degree == 0:
            cap = _cap_for(v, caps)
            if cap is None:
                raise CapError(
                    f"variable {v.name} has degree 0: per-degree rank is infinite without an exponent cap")
            if cap < 1:
                raise CapError(f"cap for {v.name} must be >= 1")
            plan.append((v, cap, None))
        elif v.odd:
            plan.append((v, 1, ring.family_of(v)))
        else:
            fam = ring.family_of(v)
            plan.append((v, 1 if fam else None, fam))
    out: dict[int, list] = {i: [] for i in range(lo, 1)}

    def walk(k, deg, acc, used):
        if k == len(plan):
            out[deg].append(tuple(acc))
            return
        v, emax, fam = plan[k]
        walk(k + 1, deg, acc, used)
        if fam is not None and fam in used:
            return
        e = 1
        while (emax is None or e <= emax) and deg + e * v.degree >= lo:
            acc.append((v, e))
            walk(k + 1, deg + e * v.degree, acc, used | {fam} if fam is not None else used)
            acc.pop()
            e += 1

    walk(0, 0, [], frozenset())
    for i in out:
        out[i].sort(key=monomial_sort_key)
    return out


def _exceeds_cap(m: Monomial, caps) -> bool:
    for v, e in m:
        if v.degree == 0:
            cap = _cap_for(v, caps)
            if cap is not None and e > cap:
                return True
    return False


def _coordinates(p: Polynomial, index: dict, caps, what: str) -> tuple[dict, bool]:
    coords = {}
    dropped = False
    for m, c in p.items():
        k = index.get(m)
        if k is None:
            if _exceeds_cap(m, caps):
                dropped = True
                continue
            raise ValueError(f"{what}: monomial {format_monomial(m)} is not a basis element")
        if not isinstance(c, int):
            raise ValueError(f"{what}: non-integral coefficient {c}")
        coords[k] = c
    return coords, dropped


def expand(ring: CDGPresentation, floor: int, caps=None) -> WindowComplex:
    """Expand a DG ring into a WindowComplex over degrees floor-1 .. 0."""
    if floor > -1:
        raise InsufficientWindow("window floor must be <= -1")
    if ring.coefficients != "Z":
        raise ValueError("window expansion needs integer coefficients")
    basis = enumerate_monomials(ring, floor - 1, caps)
    index = {i: {m: k for k, m in enumerate(ms)} for i, ms in basis.items()}
    diff = {}
    leaky = {i: set() for i in basis}
    for i in range(floor - 1, 0):
        mat = zeros(len(basis[i + 1]), len(basis[i]))
        for k, m in enumerate(basis[i]):
            dm = ring.d(Polynomial.monomial(m))
            coords, dropped = _coordinates(dm, index[i + 1], caps, f"d({format_monomial(m)})")
            if dropped:
                leaky[i].add(k)
            for r, c in coords.items():
                mat[r, k] = c
        diff[i] = mat
    for k, m in enumerate(basis[0]):
        if ring.d(Polynomial.monomial(m)):
            raise ValueError(f"d({format_monomial(m)}) is nonzero in degree 1")
    capmap = {}
    for v in ring.variables:
        if v.degree == 0:
            capmap[v.name] = _cap_for(v, caps)
    return WindowComplex(floor, basis, diff, leaky, capmap)


def unit_complex(floor: int) -> WindowComplex:
    return WindowComplex(floor, {0: [ONE]}, {})


# lattice functors ---------------------------------------------------------


@dataclass
class Sublattice:
    ambient: int
    basis: np.ndarray  # columns

    @property
    def rank(self) -> int:
        return self.basis.shape[1]


@dataclass
class WQuotient:
    """W^i = M^i / Z^i, free of rank ``rank``; ``reps`` are coset
    representatives and ``proj`` sends M^i to W-coordinates."""

    rank: int
    reps: np.ndarray
    proj: np.ndarray


@dataclass(frozen=True)
class CohomologyGroup:
    free_rank: int
    torsion: tuple = ()

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def cocycles(M: WindowComplex, i: int) -> Sublattice:
    s = M.snf(i)
    return Sublattice(M.rank(i), s.V[:, s.rank:])


def coboundaries(M: WindowComplex, i: int) -> Sublattice:
    if i < M.floor:
        raise InsufficientWindow(f"B^{i} needs d^{i - 1}, below the window floor {M.floor}")
    return Sublattice(M.rank(i), lattice.image_basis(M.d(i - 1), M.snf(i - 1)))


def W(M: WindowComplex, i: int) -> WQuotient:
    s = M.snf(i)
    r = s.rank
    return WQuotient(r, s.V[:, :r], s.Vinv[:r, :])


def _z_coords(M: WindowComplex, i: int, vectors: np.ndarray) -> np.ndarray:
    """Coordinates in the cocycle basis of vectors known to be cocycles."""
    s = M.snf(i)
    return matmul(s.Vinv[s.rank:, :], vectors)


def _b_in_z(M: WindowComplex, i: int) -> np.ndarray:
    return _z_coords(M, i, coboundaries(M, i).basis)


def _cohomology(M: WindowComplex, i: int) -> CohomologyGroup:
    bz = _b_in_z(M, i)
    free, tors = lattice.cokernel(bz)
    return CohomologyGroup(free, tuple(tors))


def cohomology(M: WindowComplex, i: int) -> CohomologyGroup:
    if i < M.floor + 1:
        raise InsufficientWindow(f"H^{i} is reported only for degrees >= {M.floor + 1}")
    if i > 0:
        return CohomologyGroup(0)
    return _cohomology(M, i)


def cohomology_table(M: WindowComplex) -> dict:
    return {i: cohomology(M, i) for i in range(M.floor + 1, 1)}


# chain maps ---------------------------------------------------------------


@dataclass(eq=False)
class ChainMapWindow:
    source: WindowComplex
    target: WindowComplex
    maps: dict
    tainted_cols: dict = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.source.floor != self.target.floor:
            raise ValueError("chain map between windows with different floors")
        for i in self.source.degrees:
            shape = (self.target.rank(i), self.source.rank(i))
            mat = self.maps.get(i)
            self.maps[i] = zeros(*shape) if mat is None else np.array(mat, dtype=object).reshape(shape)
            self.tainted_cols.setdefault(i, set())

    def __getitem__(self, i: int) -> np.ndarray:
        return self.maps[i]

    def tainted(self, i: int) -> bool:
        return (self.source.tainted(i) or self.target.tainted(i)
                or bool(self.tainted_cols.get(i)) or bool(self.tainted_cols.get(i - 1)))

    def compose(self, other: "ChainMapWindow") -> "ChainMapWindow":
        """self after other."""
        maps = {i: matmul(self.maps[i], other.maps[i]) for i in other.source.degrees}
        return ChainMapWindow(other.source, self.target, maps)


def hom_window(phi: RingHom, source: WindowComplex, target: WindowComplex) -> ChainMapWindow:
    """Matrices of a ring hom between the window expansions of its rings."""
    maps = {}
    tainted = {}
    for i in source.degrees:
        mat = zeros(target.rank(i), source.rank(i))
        bad = set()
        idx = target.index(i)
        for k, m in enumerate(source.basis[i]):
            img = phi(Polynomial.monomial(m))
            coords, dropped = _coordinates(img, idx, target.caps, f"{phi.label or 'hom'}({format_monomial(m)})")
            if dropped:
                bad.add(k)
            for r, c in coords.items():
                mat[r, k] = c
        maps[i] = mat
        tainted[i] = bad
    return ChainMapWindow(source, target, maps, tainted, label=phi.label)


def identity_map(M: WindowComplex) -> ChainMapWindow:
    return ChainMapWindow(M, M, {i: lattice.identity(M.rank(i)) for i in M.degrees}, label="id")


def check_chain_map(phi: ChainMapWindow) -> Report:
    entries = []
    S, T = phi.source, phi.target
    for i in range(S.floor - 1, 0):
        r = matmul(T.d(i), phi[i]) - matmul(phi[i + 1], S.d(i))
        ok = lattice.is_zero(r)
        entries.append(Entry("pass" if ok else "fail", degree=i, cap_tainted=phi.tainted(i + 1) and not ok))
    return Report("chain_map" + (f"[{phi.label}]" if phi.label else ""), entries)


def W_map(phi: ChainMapWindow, i: int) -> np.ndarray:
    ws, wt = W(phi.source, i), W(phi.target, i)
    return matmul(wt.proj, matmul(phi[i], ws.reps))


def Z_map(phi: ChainMapWindow, i: int) -> np.ndarray:
    zs = cocycles(phi.source, i)
    return _z_coords(phi.target, i, matmul(phi[i], zs.basis))


def B_map(phi: ChainMapWindow, i: int) -> np.ndarray:
    """Matrix of B^i(phi) in the chosen coboundary bases."""
    bs = coboundaries(phi.source, i)
    bt = coboundaries(phi.target, i)
    img = matmul(phi[i], bs.basis)
    x = lattice.solve(bt.basis, img) if bt.rank else zeros(0, bs.rank)
    if x is None:
        raise ValueError(f"phi does not map B^{i} into B^{i}; not a chain map")
    return x


def H_map_status(phi: ChainMapWindow, i: int) -> tuple[bool, bool]:
    """(injective, surjective) for H^i(phi)."""
    S, T = phi.source, phi.target
    zphi = Z_map(phi, i)
    bzs = _b_in_z(S, i)
    bzt = _b_in_z(T, i)
    joined = np.concatenate([zphi, bzt], axis=1) if zphi.size or bzt.size else zeros(zphi.shape[0], 0)
    joined = joined.reshape(zphi.shape[0], zphi.shape[1] + bzt.shape[1])
    surj = lattice.is_surjective(joined)
    # preimage of B_t under Z(phi) must equal B_s
    ker = lattice.kernel_basis(joined)
    pre = ker[: zphi.shape[1], :]
    inj = lattice.contains(bzs, pre)
    return inj, surj


def check_quasi_iso(phi: ChainMapWindow, lo: int | None = None) -> Report:
    floor = phi.source.floor
    lo = floor + 2 if lo is None else lo
    if lo < floor:
        raise InsufficientWindow(f"maps on cohomology need degree >= {floor}")
    entries = []
    for i in range(lo, 1):
        inj, surj = H_map_status(phi, i)
        hs, ht = _cohomology(phi.source, i), _cohomology(phi.target, i)
        ok = inj and surj
        detail = f"H(src) = {hs}, H(tgt) = {ht}"
        if not ok:
            detail += f"; injective={inj} surjective={surj}"
        entries.append(Entry("pass" if ok else "fail", degree=i,
                             invariants=[hs.free_rank, *hs.torsion],
                             cap_tainted=phi.tainted(i), detail=detail))
    return Report("quasi_iso" + (f"[{phi.label}]" if phi.label else ""), entries)


def check_surjective(phi: ChainMapWindow, lo: int | None = None) -> Report:
    lo = phi.source.floor + 1 if lo is None else lo
    entries = []
    for i in range(lo, 1):
        free, tors = lattice.cokernel(phi[i])
        ok = free == 0 and not tors
        entries.append(Entry("pass" if ok else "fail", degree=i,
                             invariants=[free, *tors], cap_tainted=phi.tainted(i),
                             detail="" if ok else f"cokernel Z^{free} + torsion {tors}"))
    return Report("surjective" + (f"[{phi.label}]" if phi.label else ""), entries)


# homotopies -------------------------------------------------------------


def hom_differential(M: WindowComplex, N: WindowComplex, phi: Mapping[int, np.ndarray],
                     k: int, i: int) -> np.ndarray:
    """Degree-i component of d(phi) = d_N phi - (-1)^k phi d_M for a degree-k map phi."""
    def comp(j):
        m = phi.get(j)
        return zeros(N.rank(j + k), M.rank(j)) if m is None else m
    left = matmul(N.d(i + k) if i + k <= 0 else zeros(0, N.rank(i + k)), comp(i))
    right = matmul(comp(i + 1), M.d(i))
    return left - right if k % 2 == 0 else left + right


def check_homotopy(M: WindowComplex, pi: ChainMapWindow, iota: ChainMapWindow,
                   h: Mapping[int, np.ndarray], h_tainted: Mapping[int, set] | None = None) -> Report:
    """Verify d h + h d = id - iota pi in degrees floor+1 .. 0.

    Columns touched by a cap (through d or h) are reported as tainted.
    """
    h_tainted = h_tainted or {}
    ip = iota.compose(pi)
    entries = []
    for i in range(M.floor + 1, 1):
        lhs = hom_differential(M, M, h, -1, i)
        rhs = lattice.identity(M.rank(i)) - ip[i]
        diff = lhs - rhs
        bad_cols = [c for c in range(M.rank(i)) if any(x != 0 for x in diff[:, c])]
        taint = _homotopy_taint(M, h, h_tainted, i)
        real = [c for c in bad_cols if c not in taint]
        touched = [c for c in bad_cols if c in taint]
        detail = ""
        if real:
            detail = "residue at " + ", ".join(_label(M.basis[i][c]) for c in real)
        elif touched:
            detail = "residue only at cap-tainted " + ", ".join(_label(M.basis[i][c]) for c in touched)
        entries.append(Entry("pass" if not real else "fail", degree=i,
                             cap_tainted=bool(touched) and not real, detail=detail))
    return Report("homotopy", entries)


def _homotopy_taint(M, h, h_tainted, i) -> set:
    taint = set(M.leaky.get(i, ())) | set(h_tainted.get(i, ()))
    hi = h.get(i)
    di = M.d(i) if i < 0 else None
    for c in range(M.rank(i)):
        if hi is not None and i - 1 >= M.floor - 1:
            rows = [r for r in range(hi.shape[0]) if hi[r, c] != 0]
            if any(r in M.leaky.get(i - 1, ()) for r in rows):
                taint.add(c)
        if di is not None:
            rows = [r for r in range(di.shape[0]) if di[r, c] != 0]
            if any(r in h_tainted.get(i + 1, ()) for r in rows):
                taint.add(c)
    return taint


def _label(b: Hashable) -> str:
    if isinstance(b, tuple):
        return format_monomial(b)
    return str(b)


# exactness ----------------------------------------------------------------


def check_d_squared_window(M: WindowComplex) -> Report:
    entries = []
    for i in range(M.floor - 1, -1):
        ok = lattice.is_zero(matmul(M.d(i + 1), M.d(i)))
        entries.append(Entry("pass" if ok else "fail", degree=i,
                             detail="" if ok else f"d^{i + 1} d^{i} != 0"))
    return Report("window_d_squared", entries)


def check_exact_sequences(M: WindowComplex) -> Report:
    """Rank and torsion bookkeeping for
    0 -> Z^{i-1} -> M^{i-1} -> B^i -> 0,  0 -> B^i -> Z^i -> H^i -> 0,
    0 -> Z^i -> M^i -> W^i -> 0."""
    entries = []
    for i in range(M.floor, 1):
        # first sequence
        z_prev = cocycles(M, i - 1)
        b = coboundaries(M, i)
        dprev = M.d(i - 1)
        ok1 = (lattice.is_zero(matmul(dprev, z_prev.basis))
               and z_prev.rank + b.rank == M.rank(i - 1)
               and not lattice.cokernel(z_prev.basis)[1]
               and lattice.contains(b.basis, dprev)
               and (b.rank == 0 or lattice.solve(dprev, b.basis) is not None))
        entries.append(Entry("pass" if ok1 else "fail", degree=i, index="Z->M->B",
                             invariants=[z_prev.rank, M.rank(i - 1), b.rank]))
        # second sequence
        z = cocycles(M, i)
        di = M.d(i)
        b_closed = lattice.is_zero(matmul(di, b.basis))
        if b_closed:
            bz = _z_coords(M, i, b.basis)
            b_in_z = lattice.is_zero(matmul(z.basis, bz) - b.basis)
            free, tors = lattice.cokernel(bz)
            ok2 = b_in_z and z.rank == b.rank + free
            h_inv = [free, *tors]
        else:
            ok2, h_inv = False, None
        entries.append(Entry("pass" if ok2 else "fail", degree=i, index="B->Z->H", invariants=h_inv,
                             detail="" if ok2 else "coboundaries are not cocycles"))
        # third sequence
        w = W(M, i)
        ok3 = z.rank + w.rank == M.rank(i)
        if z.rank:
            free, tors = lattice.cokernel(z.basis)
            ok3 = ok3 and free == w.rank and not tors
        entries.append(Entry("pass" if ok3 else "fail", degree=i, index="Z->M->W",
                             invariants=[z.rank, M.rank(i), w.rank]))
    return Report("exact_sequences", entries)
