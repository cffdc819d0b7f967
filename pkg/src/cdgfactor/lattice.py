"""
Exact integer linear algebra: Smith normal form with unimodular transforms,
kernels, images, integer solving and cokernels.

Matrices are numpy arrays of dtype=object holding Python ints, so there is
no overflow and zero-sized shapes are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def imatrix(rows, shape=None) -> np.ndarray:
    if shape is not None and len(rows) == 0:
        return np.zeros(shape, dtype=object)
    a = np.array(rows, dtype=object)
    if a.ndim == 1:
        a = a.reshape((1, -1)) if a.size else np.zeros(shape or (0, 0), dtype=object)
    return a


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if 0 in a.shape or 0 in b.shape:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b).astype(object)


def is_zero(a: np.ndarray) -> bool:
    return not any(x != 0 for x in a.flat)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass
class SNFResult:
    """U @ A @ V == D with U, V unimodular; Uinv, Vinv are their inverses."""

    invariants: list  # nonzero diagonal entries d_1 | d_2 | ... (length = rank)
    D: np.ndarray
    U: np.ndarray
    V: np.ndarray
    Uinv: np.ndarray
    Vinv: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def diagonal(self) -> list:
        """All min(m, n) diagonal entries, zeros included."""
        k = min(self.D.shape)
        return [self.D[i, i] for i in range(k)]


def smith_normal_form(a) -> SNFResult:
    A = np.array(a, dtype=object).copy()
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, n = A.shape
    U, Ui, V, Vi = identity(m), identity(m), identity(n), identity(n)

    def swap_rows(i, j):
        if i != j:
            A[[i, j]] = A[[j, i]]
            U[[i, j]] = U[[j, i]]
            Ui[:, [i, j]] = Ui[:, [j, i]]

    def swap_cols(i, j):
        if i != j:
            A[:, [i, j]] = A[:, [j, i]]
            V[:, [i, j]] = V[:, [j, i]]
            Vi[[i, j]] = Vi[[j, i]]

    def row_combine(t, i):
        # replace rows (t, i) by a unimodular combination putting gcd at (t, t)
        a_, b_ = A[t, t], A[i, t]
        g, x, y = _xgcd(a_, b_)
        p, q = -(b_ // g), a_ // g
        At, Ai = A[t].copy(), A[i].copy()
        A[t], A[i] = x * At + y * Ai, p * At + q * Ai
        Ut, Uu = U[t].copy(), U[i].copy()
        U[t], U[i] = x * Ut + y * Uu, p * Ut + q * Uu
        # inverse of [[x, y], [p, q]] is [[q, -y], [-p, x]]
        Ct, Ci = Ui[:, t].copy(), Ui[:, i].copy()
        Ui[:, t], Ui[:, i] = q * Ct - p * Ci, -y * Ct + x * Ci

    def col_combine(t, j):
        a_, b_ = A[t, t], A[t, j]
        g, x, y = _xgcd(a_, b_)
        p, q = -(b_ // g), a_ // g
        Ct, Cj = A[:, t].copy(), A[:, j].copy()
        A[:, t], A[:, j] = x * Ct + y * Cj, p * Ct + q * Cj
        Vt, Vj = V[:, t].copy(), V[:, j].copy()
        V[:, t], V[:, j] = x * Vt + y * Vj, p * Vt + q * Vj
        Rt, Rj = Vi[t].copy(), Vi[j].copy()
        Vi[t], Vi[j] = q * Rt - p * Rj, -y * Rt + x * Rj

    t = 0
    while t < min(m, n):
        sub = A[t:, t:]
        nz = [(abs(sub[i, j]), i, j) for i, j in zip(*np.nonzero(sub != 0))]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, t + i0)
        swap_cols(t, t + j0)
        while True:
            for i in range(t + 1, m):
                if A[i, t] != 0:
                    if A[i, t] % A[t, t] == 0:
                        q = A[i, t] // A[t, t]
                        A[i] -= q * A[t]
                        U[i] -= q * U[t]
                        Ui[:, t] += q * Ui[:, i]
                    else:
                        row_combine(t, i)
            for j in range(t + 1, n):
                if A[t, j] != 0:
                    if A[t, j] % A[t, t] == 0:
                        q = A[t, j] // A[t, t]
                        A[:, j] -= q * A[:, t]
                        V[:, j] -= q * V[:, t]
                        Vi[t] += q * Vi[j]
                    else:
                        col_combine(t, j)
            if any(A[i, t] != 0 for i in range(t + 1, m)):
                continue
            p = A[t, t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i, j] % p != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row_t += row_bad brings a non-multiple into row t
            A[t] += A[bad]
            U[t] += U[bad]
            Ui[:, bad] -= Ui[:, t]
        if A[t, t] < 0:
            A[t] = -A[t]
            U[t] = -U[t]
            Ui[:, t] = -Ui[:, t]
        t += 1
    inv = [A[i, i] for i in range(min(m, n)) if A[i, i] != 0]
    return SNFResult(inv, A, U, V, Ui, Vi)


def rank(a) -> int:
    return smith_normal_form(a).rank


def kernel_basis(a, snf: SNFResult | None = None) -> np.ndarray:
    """Columns form a basis of the (saturated) kernel lattice."""
    s = snf or smith_normal_form(a)
    return s.V[:, s.rank:]


def image_basis(a, snf: SNFResult | None = None) -> np.ndarray:
    """Columns form a basis of the image lattice (full column rank)."""
    s = snf or smith_normal_form(a)
    r = s.rank
    out = s.Uinv[:, :r].copy()
    for k in range(r):
        out[:, k] *= s.invariants[k]
    return out


def solve(a, b, snf: SNFResult | None = None):
    """Integer solution X of a @ X == b (b a matrix), or None if none exists."""
    s = snf or smith_normal_form(a)
    b = np.array(b, dtype=object)
    if b.ndim == 1:
        b = b.reshape((-1, 1))
    m, n = s.D.shape
    c = matmul(s.U, b)
    r = s.rank
    y = zeros(n, b.shape[1])
    for k in range(m):
        for col in range(b.shape[1]):
            v = c[k, col]
            if k < r:
                if v % s.invariants[k]:
                    return None
                y[k, col] = v // s.invariants[k]
            elif v != 0:
                return None
    return matmul(s.V, y)


def cokernel(a, snf: SNFResult | None = None) -> tuple[int, list]:
    """(free rank, torsion invariants > 1) of Z^m / a Z^n."""
    s = snf or smith_normal_form(a)
    m = s.D.shape[0]
    return m - s.rank, [d for d in s.invariants if d != 1]


def is_surjective(a) -> bool:
    free, tors = cokernel(a)
    return free == 0 and not tors


def contains(basis: np.ndarray, vectors: np.ndarray) -> bool:
    """Whether every column of ``vectors`` lies in the lattice spanned by ``basis``."""
    if vectors.shape[1] == 0:
        return True
    if basis.shape[1] == 0:
        return is_zero(vectors)
    return solve(basis, vectors) is not None
