"""
Divided power structures as oracles, and mechanical checks of the axioms

    (PD1)  g^0(a) = 1,  g^1(a) = a,  g^k(a) g^l(a) = binom(k+l, l) g^(k+l)(a)
    (PD2)  d(g^k(a)) = d(a) g^(k-1)(a)   for k >= 1

on even elements of degree <= -2.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Mapping

from .dg import CDGPresentation
from .graded import Polynomial, format_monomial
from .reports import Entry, Report


class PDRejected(ValueError):
    """The oracle does not define gamma on this element."""


def _require_even(a: Polynomial) -> int:
    deg = a.degree()
    if deg is None:
        raise PDRejected("gamma is only defined on homogeneous nonzero elements")
    if deg % 2 or deg > -2:
        raise PDRejected(f"gamma needs an even degree <= -2, got {deg}")
    return deg


class PDOracle:
    """Base class: ``gamma(k, a)`` plus ``truncated(k, a)``."""

    kind = "abstract"

    def __init__(self, ring: CDGPresentation):
        self.ring = ring

    def gamma(self, k: int, a: Polynomial) -> Polynomial:
        raise NotImplementedError

    def truncated(self, k: int, a: Polynomial) -> bool:
        return False

    def accepts(self, a: Polynomial) -> bool:
        try:
            self.gamma(1, a)
        except PDRejected:
            return False
        return True


class Char0Gamma(PDOracle):
    """gamma^k(a) = a^k / k!, the unique structure when Q is in the coefficients."""

    kind = "char0"

    def __init__(self, ring: CDGPresentation):
        if ring.coefficients != "Q":
            raise PDRejected("the characteristic-0 rule needs rational coefficients")
        super().__init__(ring)

    def gamma(self, k, a):
        if k < 0:
            raise PDRejected("k must be >= 0")
        _require_even(a)
        return self.ring.power(a, k).scale(Fraction(1, factorial(k)))


class DividedPowerGamma(PDOracle):
    """Canonical gamma on multiples c * x_i of divided-power family members:

        gamma^k(c x_i) = c^k (k i)! / (k! (i!)^k) x_{k i}
    """

    kind = "dp-canonical"

    def _member(self, a: Polynomial):
        if len(a) != 1:
            raise PDRejected(f"{a} is not a multiple of a divided-power variable")
        (m, c), = a.items()
        if len(m) != 1 or m[0][1] != 1:
            raise PDRejected(f"{a} is not a multiple of a divided-power variable")
        v = m[0][0]
        fam = self.ring.family_of(v)
        if fam is None:
            raise PDRejected(f"{v.name} is not in a divided-power family")
        return fam, fam.index(v), c

    def truncated(self, k, a):
        fam, i, _ = self._member(a)
        return k * i > fam.cutoff

    def gamma(self, k, a):
        if k < 0:
            raise PDRejected("k must be >= 0")
        _require_even(a)
        fam, i, c = self._member(a)
        if k == 0:
            return Polynomial.const(1)
        if k * i > fam.cutoff:
            return Polynomial()
        coeff = factorial(k * i) // (factorial(k) * factorial(i) ** k)
        return Polynomial.var(fam.member(k * i)).scale(coeff * c ** k)


class TableGamma(PDOracle):
    """An explicit finite table ``{variable name: {k: Polynomial}}``.

    gamma^0 = 1 and gamma^1 = a are implied; other entries must be listed.
    """

    kind = "table"

    def __init__(self, ring: CDGPresentation, table: Mapping[str, Mapping[int, Polynomial]]):
        super().__init__(ring)
        self.table = {}
        for name, row in table.items():
            if name not in ring.names:
                raise PDRejected(f"table entry for unknown variable {name!r}")
            a = ring.var(name)
            self.table[a] = {int(k): ring.reduce(v) for k, v in row.items()}

    def gamma(self, k, a):
        if k < 0:
            raise PDRejected("k must be >= 0")
        _require_even(a)
        row = self.table.get(a)
        if row is None:
            raise PDRejected(f"no table entry for {a}")
        if k in row:
            return row[k]
        if k == 0:
            return Polynomial.const(1)
        if k == 1:
            return a
        raise PDRejected(f"table has no gamma^{k}({a})")


def check_pd(oracle: PDOracle, elements, k_max: int = 4, l_max: int = 4) -> Report:
    """Check (PD1) for k <= k_max, l <= l_max and (PD2) for 1 <= k <= k_max + l_max."""
    ring = oracle.ring
    entries = []
    for a in elements:
        label = str(a)
        deg = a.degree()

        def g(k):
            return oracle.gamma(k, a)

        try:
            r0 = g(0) - Polynomial.const(1)
            r1 = g(1) - a
        except PDRejected as exc:
            entries.append(Entry("fail", degree=deg, index=label, detail=f"rejected: {exc}"))
            continue
        entries.append(Entry("pass" if not r0 else "fail", deg, (label, "PD1", 0),
                             detail="" if not r0 else f"gamma^0 - 1 = {r0}"))
        entries.append(Entry("pass" if not r1 else "fail", deg, (label, "PD1", 1),
                             detail="" if not r1 else f"gamma^1 - a = {r1}"))
        for k in range(1, k_max + 1):
            for l in range(1, l_max + 1):
                trunc = oracle.truncated(k + l, a)
                try:
                    r = ring.mul(g(k), g(l)) - g(k + l).scale(comb(k + l, l))
                except PDRejected as exc:
                    entries.append(Entry("fail", deg, (label, "PD1", k, l), detail=f"rejected: {exc}"))
                    continue
                entries.append(Entry("pass" if not r else "fail", deg, (label, "PD1", k, l),
                                     cap_tainted=trunc and bool(r),
                                     detail="" if not r else f"residue {r}"))
        da = ring.d(a)
        for k in range(1, k_max + l_max + 1):
            trunc = oracle.truncated(k, a)
            try:
                r = ring.d(g(k)) - ring.mul(da, g(k - 1))
            except PDRejected as exc:
                entries.append(Entry("fail", deg, (label, "PD2", k), detail=f"rejected: {exc}"))
                continue
            entries.append(Entry("pass" if not r else "fail", deg, (label, "PD2", k),
                                 cap_tainted=trunc and bool(r),
                                 detail="" if not r else f"residue {r}"))
    return Report(f"pd[{oracle.kind}]", entries)


def pd_obstruction_witness(ring: CDGPresentation, a: Polynomial, k: int) -> dict | None:
    """A monomial coefficient of a^k not divisible by k!, or None.

    Since a^k = k! gamma^k(a) under any PD structure, a witness rules one out.
    """
    if ring.coefficients != "Z":
        raise ValueError("obstructions are only meaningful over Z")
    power = ring.power(a, k)
    f = factorial(k)
    for m, c in power.sorted_terms():
        if c % f:
            return {"element": str(a), "k": k, "power": str(power),
                    "monomial": format_monomial(m), "coefficient": c, "factorial": f}
    return None
