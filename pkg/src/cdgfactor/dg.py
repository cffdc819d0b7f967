"""
DG ring presentations, Leibniz extension of differentials, DG ring
homomorphisms and finite tensor products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

from .graded import ONE, Monomial, Polynomial, Var, mul_monomials, normalize
from .reports import Entry, Report


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class DividedPowerFamily:
    """Members x_1..x_K of degrees n, 2n, ..., Kn subject to
    x_i * x_j = binom(i+j, j) * x_{i+j}; products past x_K are truncated.
    """

    name: str
    n: int
    members: tuple  # members[i-1] is x_i
    companion: Var | None = None

    def __post_init__(self):
        if self.n % 2 or self.n > -2:
            raise PresentationError(f"family {self.name}: n must be even and <= -2")
        for i, v in enumerate(self.members, 1):
            if v.degree != self.n * i:
                raise PresentationError(
                    f"family {self.name}: deg {v.name} = {v.degree}, expected {self.n * i}")
        if self.companion is not None and self.companion.degree != self.n + 1:
            raise PresentationError(f"family {self.name}: companion degree must be {self.n + 1}")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.members, 1)})

    @property
    def cutoff(self) -> int:
        return len(self.members)

    def index(self, v: Var) -> int | None:
        return self._index.get(v)

    def member(self, i: int) -> Var:
        return self.members[i - 1]

    def relation(self, i: int, j: int) -> Polynomial:
        """r_{i,j} = x_i x_j - binom(i+j, j) x_{i+j} in the free ring, with x_0 = 1."""
        def x(k):
            return Polynomial.const(1) if k == 0 else Polynomial.var(self.member(k))
        if i + j > self.cutoff:
            raise ValueError(f"r_{{{i},{j}}} needs x_{i + j} beyond cutoff {self.cutoff}")
        return x(i) * x(j) - x(i + j).scale(comb(i + j, j))

    def reduce_monomial(self, m: Monomial) -> tuple[int, Monomial]:
        """Rewrite member factors to normal form.  Returns (coefficient, monomial);
        coefficient 0 means the product ran past the cutoff."""
        idx = []
        rest = []
        for v, e in m:
            i = self._index.get(v)
            if i is None:
                rest.append((v, e))
            else:
                idx.extend([i] * e)
        if len(idx) <= 1:
            return 1, m
        coeff = 1
        # leftmost adjacent pair first; each step removes one x-factor
        while len(idx) > 1:
            i, j = idx[0], idx[1]
            if i + j > self.cutoff:
                return 0, ONE
            coeff *= comb(i + j, j)
            idx[0:2] = [i + j]
        rest.append((self.member(idx[0]), 1))
        # members are even, so re-sorting costs no sign
        out, s = normalize(rest)
        return coeff * s, out

    def renamed(self, rename: Mapping[Var, Var], name: str) -> "DividedPowerFamily":
        return DividedPowerFamily(
            name, self.n, tuple(rename[v] for v in self.members),
            None if self.companion is None else rename[self.companion])


def rename_polynomial(p: Polynomial, rename: Mapping[Var, Var]) -> Polynomial:
    out = Polynomial()
    for m, c in p.items():
        mm, s = normalize([(rename[v], e) for v, e in m])
        if s:
            out = out + Polynomial({mm: s * c})
    return out


@dataclass(frozen=True, eq=False)
class CDGPresentation:
    """A CDG ring given by graded generators, the differential on generators,
    and optional divided-power rewrite families."""

    variables: tuple
    differential: Mapping[Var, Polynomial]
    families: tuple = ()
    coefficients: str = "Z"
    label: str = ""
    _by_name: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.coefficients not in ("Z", "Q"):
            raise PresentationError(f"coefficients must be 'Z' or 'Q', got {self.coefficients!r}")
        names = {}
        keys = set()
        for v in self.variables:
            if v.degree > 0:
                raise PresentationError(f"variable {v.name} has positive degree {v.degree}")
            if v.name in names:
                raise PresentationError(f"duplicate variable name {v.name!r}")
            if v.key in keys:
                raise PresentationError(f"duplicate variable key {v.key!r}")
            names[v.name] = v
            keys.add(v.key)
        object.__setattr__(self, "variables", tuple(sorted(self.variables)))
        object.__setattr__(self, "_by_name", names)
        diff = {}
        for v in self.variables:
            dv = self.differential.get(v, Polynomial())
            stray = dv.variables() - set(self.variables)
            if stray:
                raise PresentationError(f"d({v.name}) uses unknown variables {sorted(s.name for s in stray)}")
            if dv and dv.degrees() != {v.degree + 1}:
                raise PresentationError(
                    f"d({v.name}) must be homogeneous of degree {v.degree + 1}, got {sorted(dv.degrees())}")
            diff[v] = dv
        extra = set(self.differential) - set(self.variables)
        if extra:
            raise PresentationError(f"differential given for unknown {sorted(v.name for v in extra)}")
        object.__setattr__(self, "differential", diff)
        member_of = {}
        for fam in self.families:
            for v in fam.members + ((fam.companion,) if fam.companion else ()):
                if v not in names.values():
                    raise PresentationError(f"family {fam.name} uses unknown variable {v.name}")
            for v in fam.members:
                if v in member_of:
                    raise PresentationError(f"{v.name} belongs to two families")
                member_of[v] = fam
        object.__setattr__(self, "_member_of", member_of)

    def __getitem__(self, name: str) -> Var:
        return self._by_name[name]

    def var(self, name: str) -> Polynomial:
        return Polynomial.var(self._by_name[name])

    @property
    def names(self) -> dict[str, Var]:
        return dict(self._by_name)

    def family_of(self, v: Var) -> DividedPowerFamily | None:
        return self._member_of.get(v)

    # arithmetic ---------------------------------------------------------

    def reduce(self, p: Polynomial) -> Polynomial:
        """Normal form modulo the divided-power relations."""
        if not self.families:
            return p
        out: dict = {}
        for m, c in p.items():
            coeff = 1
            mm = m
            for fam in self.families:
                k, mm = fam.reduce_monomial(mm)
                coeff *= k
                if not coeff:
                    break
            if coeff:
                out[mm] = out.get(mm, 0) + coeff * c
        return Polynomial(out)

    def mul(self, *ps: Polynomial) -> Polynomial:
        out = Polynomial.const(1)
        for p in ps:
            out = self.reduce(out * p)
        return out

    def power(self, p: Polynomial, k: int) -> Polynomial:
        out = Polynomial.const(1)
        for _ in range(k):
            out = self.reduce(out * p)
        return out

    def d(self, p: Polynomial) -> Polynomial:
        return extend_differential(self, p)

    def one(self) -> Polynomial:
        return Polynomial.const(1)


def same_ring(r: CDGPresentation, s: CDGPresentation) -> bool:
    """Structural equality of presentations."""
    return r is s or (r.variables == s.variables and r.differential == s.differential
                      and r.families == s.families and r.coefficients == s.coefficients)


def unit_ring(coefficients: str = "Z") -> CDGPresentation:
    """The coefficient ring itself, concentrated in degree 0."""
    return CDGPresentation((), {}, coefficients=coefficients, label="unit")


def _d_monomial(ring: CDGPresentation, m: Monomial) -> Polynomial:
    out = Polynomial()
    left: Monomial = ONE
    left_deg = 0
    for t, (v, e) in enumerate(m):
        dv = ring.differential[v]
        if dv:
            # d(v^e) = e * v^(e-1) * d(v) for even v; e = 1 for odd v
            piece = dv.scale(e)
            if e > 1:
                piece = Polynomial.monomial(((v, e - 1),)) * piece
            term = Polynomial.monomial(left) * piece * Polynomial.monomial(m[t + 1:])
            if left_deg % 2:
                term = -term
            out = out + term
        left, _ = mul_monomials(left, ((v, e),))
        left_deg += v.degree * e
    return out


def extend_differential(ring: CDGPresentation, p: Polynomial) -> Polynomial:
    """Apply the unique derivation of degree +1 extending the generator table."""
    out = Polynomial()
    for m, c in p.items():
        out = out + _d_monomial(ring, m).scale(c)
    return ring.reduce(out)


def check_d_squared(ring: CDGPresentation) -> Report:
    """d(d(v)) for every generator; by the Leibniz rule this decides d^2 = 0."""
    entries = []
    for v in ring.variables:
        r = ring.d(ring.d(Polynomial.var(v)))
        entries.append(Entry(
            "pass" if not r else "fail", degree=v.degree, index=v.name,
            detail="" if not r else f"d(d({v.name})) = {r}"))
    return Report("d_squared", entries)


@dataclass(frozen=True, eq=False)
class RingHom:
    """A graded ring map given by images of the source generators."""

    source: CDGPresentation
    target: CDGPresentation
    images: Mapping[Var, Polynomial]
    label: str = ""

    def __post_init__(self):
        imgs = {}
        tvars = set(self.target.variables)
        for v in self.source.variables:
            img = self.target.reduce(self.images.get(v, Polynomial()))
            stray = img.variables() - tvars
            if stray:
                raise PresentationError(
                    f"image of {v.name} uses variables outside the target: {sorted(s.name for s in stray)}")
            if img and img.degrees() != {v.degree}:
                raise PresentationError(
                    f"image of {v.name} must be homogeneous of degree {v.degree}, got {sorted(img.degrees())}")
            imgs[v] = img
        extra = set(self.images) - set(self.source.variables)
        if extra:
            raise PresentationError(f"images given for unknown {sorted(v.name for v in extra)}")
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "_powers", {})

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply_hom(self, p)

    def image_of(self, v: Var, e: int = 1) -> Polynomial:
        cache = self._powers
        if (v, e) not in cache:
            cache[(v, e)] = self.target.power(self.images[v], e)
        return cache[(v, e)]

    def compose(self, other: "RingHom") -> "RingHom":
        """self after other."""
        return RingHom(other.source, self.target,
                       {v: self(img) for v, img in other.images.items()})


def apply_hom(phi: RingHom, p: Polynomial) -> Polynomial:
    tgt = phi.target
    out = Polynomial()
    for m, c in p.items():
        img = Polynomial.const(c)
        for v, e in m:
            img = tgt.reduce(img * phi.image_of(v, e))
            if not img:
                break
        out = out + img
    return out


def identity_hom(ring: CDGPresentation) -> RingHom:
    return RingHom(ring, ring, {v: Polynomial.var(v) for v in ring.variables}, label="id")


def check_hom_is_dg(phi: RingHom) -> Report:
    entries = []
    for v in phi.source.variables:
        lhs = phi(phi.source.differential[v])
        rhs = phi.target.d(phi.images[v])
        r = lhs - rhs
        entries.append(Entry(
            "pass" if not r else "fail", degree=v.degree, index=v.name,
            detail="" if not r else f"phi(d {v.name}) - d(phi {v.name}) = {r}"))
    return Report("hom_is_dg" + (f"[{phi.label}]" if phi.label else ""), entries)


def homs_agree(phi: RingHom, psi: RingHom, name: str) -> Report:
    """Generator-level equality of two homs with the same source."""
    if psi.source is not phi.source:
        raise ValueError("homs have different sources")
    entries = []
    for v in phi.source.variables:
        r = phi.images[v] - psi.images[v]
        entries.append(Entry("pass" if not r else "fail", degree=v.degree, index=v.name,
                             detail="" if not r else f"residue {r}"))
    return Report(name, entries)


def tensor(rings: Sequence[CDGPresentation], prefixes: Sequence[str] | None = None,
           label: str = "") -> tuple[CDGPresentation, list[RingHom]]:
    """Finite coproduct over the coefficient ring.

    Variable of stage s gets key (s, *key) and name prefixes[s] + name.
    Returns the tensor ring and the inclusion homs of each factor.
    """
    coeffs = {r.coefficients for r in rings} or {"Z"}
    if len(coeffs) > 1:
        raise PresentationError("tensor factors have different coefficient rings")
    if prefixes is None:
        prefixes = [f"t{s}." for s in range(len(rings))]
    renames = []
    variables = []
    seen = {}
    for s, (ring, pre) in enumerate(zip(rings, prefixes)):
        rn = {}
        for v in ring.variables:
            w = Var((s,) + v.key, pre + v.name, v.degree)
            if w.name in seen:
                raise PresentationError(f"name collision {w.name!r} in tensor")
            seen[w.name] = w
            rn[v] = w
            variables.append(w)
        renames.append(rn)
    diff = {}
    families = []
    for ring, rn, pre in zip(rings, renames, prefixes):
        for v, dv in ring.differential.items():
            diff[rn[v]] = rename_polynomial(dv, rn)
        for fam in ring.families:
            families.append(fam.renamed(rn, pre + fam.name))
    out = CDGPresentation(tuple(variables), diff, tuple(families), coeffs.pop(), label=label)
    incl = [RingHom(ring, out, {v: Polynomial.var(rn[v]) for v in ring.variables}, label=f"incl{s}")
            for s, (ring, rn) in enumerate(zip(rings, renames))]
    return out, incl


def induced_hom(source: CDGPresentation, target: CDGPresentation,
                parts: Sequence[RingHom], inclusions: Sequence[RingHom], label: str = "") -> RingHom:
    """The map out of a tensor product determined by maps out of its factors."""
    images = {}
    for phi, inc in zip(parts, inclusions):
        for v in inc.source.variables:
            (w,) = inc.images[v].variables()
            images[w] = phi.images[v]
    return RingHom(source, target, images, label=label)
