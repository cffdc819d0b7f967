"""
Sparse strongly commutative graded polynomials with exact coefficients.

A monomial is a tuple of ``(Var, exponent)`` pairs sorted by ``Var.key``.
Swapping two adjacent factors of degrees i and j costs a sign (-1)^(i*j),
and any odd variable appearing twice kills the monomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Union

Coeff = Union[int, Fraction]


class Var(NamedTuple):
    """A graded variable.  Ordering (and hence sign convention) is by ``key``."""

    key: tuple
    name: str
    degree: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 != 0

    def __repr__(self):
        return f"Var({self.name!r}, {self.degree})"


Monomial = tuple  # tuple[tuple[Var, int], ...]

ONE: Monomial = ()


def monomial_degree(m: Monomial) -> int:
    return sum(v.degree * e for v, e in m)


def _odd_factor(v: Var, e: int) -> bool:
    return (v.degree * e) % 2 != 0


def normalize(factors: Iterable[tuple[Var, int]]) -> tuple[Monomial, int]:
    """Sort a list of factors into canonical order.

    Returns ``(monomial, sign)``; ``sign`` is 0 when an odd variable occurs
    with total exponent at least 2.
    """
    items = [(v, e) for v, e in factors if e != 0]
    for v, e in items:
        if e < 0:
            raise ValueError(f"negative exponent on {v.name}")
        if v.odd and e > 1:
            return ONE, 0
    # insertion sort, counting transpositions of odd factors
    sign = 1
    out: list[tuple[Var, int]] = []
    for v, e in items:
        pos = len(out)
        while pos > 0 and out[pos - 1][0].key > v.key:
            pos -= 1
            if _odd_factor(v, e) and _odd_factor(*out[pos]):
                sign = -sign
        out.insert(pos, (v, e))
    merged: list[tuple[Var, int]] = []
    for v, e in out:
        if merged and merged[-1][0] == v:
            if v.odd:
                return ONE, 0
            merged[-1] = (v, merged[-1][1] + e)
        elif merged and merged[-1][0].key == v.key:
            raise ValueError(f"variables {merged[-1][0].name} and {v.name} share a key")
        else:
            merged.append((v, e))
    return tuple(merged), sign


def mul_monomials(a: Monomial, b: Monomial) -> tuple[Monomial, int]:
    """Product of two canonical monomials with its Koszul sign (0 if it vanishes)."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    out = []
    sign = 1
    i = j = 0
    # number of odd factors of ``a`` not yet emitted
    odd_left = sum(1 for v, e in a if _odd_factor(v, e))
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va.key < vb.key:
            out.append(a[i])
            if _odd_factor(va, ea):
                odd_left -= 1
            i += 1
        elif vb.key < va.key:
            if _odd_factor(vb, eb) and odd_left % 2:
                sign = -sign
            out.append(b[j])
            j += 1
        else:
            if va.odd:
                return ONE, 0
            out.append((va, ea + eb))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), sign


def _clean(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class Polynomial:
    """Finite sum of canonical monomials with nonzero exact coefficients.

    Values are immutable by convention: every operation returns a new object.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = _clean(c)
        self.terms: dict[Monomial, Coeff] = clean

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c: Coeff) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def var(cls, v: Var) -> "Polynomial":
        return cls({((v, 1),): 1})

    @classmethod
    def monomial(cls, m: Monomial, c: Coeff = 1) -> "Polynomial":
        return cls({m: c})

    @classmethod
    def from_factors(cls, factors, c: Coeff = 1) -> "Polynomial":
        m, s = normalize(factors)
        return cls({m: s * c}) if s else cls()

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def items(self):
        return self.terms.items()

    def coefficient(self, m: Monomial) -> Coeff:
        return self.terms.get(m, 0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _clean(s)
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Coeff) -> "Polynomial":
        if not c:
            return Polynomial()
        return Polynomial._raw({m: _clean(c * v) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m, s = mul_monomials(ma, mb)
                if not s:
                    continue
                v = out.get(m, 0) + s * ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw({m: _clean(c) for m, c in out.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.const(1)
        for _ in range(k):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {monomial_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int | None:
        """Degree of a homogeneous polynomial; ``None`` for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous polynomial, degrees {sorted(ds)}")
        return ds.pop()

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v, _ in m}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: monomial_sort_key(t[0]))

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def monomial_sort_key(m: Monomial):
    """Degree-lexicographic: higher degree first, then by variable keys."""
    return (-monomial_degree(m), tuple((v.key, e) for v, e in m))


def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in m)


def format_polynomial(p: Polynomial) -> str:
    if not p:
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        if not m:
            parts.append(str(c))
        elif c == 1:
            parts.append(format_monomial(m))
        elif c == -1:
            parts.append("-" + format_monomial(m))
        else:
            parts.append(f"{c}*{format_monomial(m)}")
    return " + ".join(parts).replace("+ -", "- ")


# term-list format --------------------------------------------------------


class ParseError(ValueError):
    pass


def parse_coeff(text) -> Coeff:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ParseError(f"coefficient must be a decimal string, got {text!r}")
    try:
        c = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed coefficient {text!r}") from exc
    return _clean(c)


def parse_terms(terms, variables: dict[str, Var]) -> Polynomial:
    """Parse a term list ``[{"coeff": "3", "monomial": [["x", 1], ...]}, ...]``.

    Factors may come in any order; the Koszul sign of sorting is applied.
    Odd variables with exponent >= 2 are rejected rather than zeroed.
    """
    if not isinstance(terms, list):
        raise ParseError("term list must be a JSON array")
    out = Polynomial()
    for n, term in enumerate(terms):
        if not isinstance(term, dict) or set(term) != {"coeff", "monomial"}:
            raise ParseError(f"term {n}: expected keys 'coeff' and 'monomial'")
        c = parse_coeff(term["coeff"])
        factors = []
        mono = term["monomial"]
        if not isinstance(mono, list):
            raise ParseError(f"term {n}: monomial must be a list")
        for f in mono:
            if (not isinstance(f, list) or len(f) != 2 or not isinstance(f[0], str)
                    or isinstance(f[1], bool) or not isinstance(f[1], int)):
                raise ParseError(f"term {n}: malformed factor {f!r}")
            name, e = f
            if name not in variables:
                raise ParseError(f"term {n}: unknown variable {name!r}")
            if e < 1:
                raise ParseError(f"term {n}: exponent of {name} must be >= 1")
            v = variables[name]
            if v.odd and e > 1:
                raise ParseError(f"term {n}: odd variable {name} with exponent {e}")
            factors.append((v, e))
        m, s = normalize(factors)
        if s:
            out = out + Polynomial({m: s * c})
    return out


def format_terms(p: Polynomial) -> list:
    out = []
    for m, c in p.sorted_terms():
        out.append({"coeff": str(c), "monomial": [[v.name, e] for v, e in m]})
    return out
