"""
JSON documents: rings, homs, PD descriptors, factorization inputs and results.

Errors in input documents are raised as DocumentError carrying an
approximate line number recovered from the JSON path of the offending value.
"""

from __future__ import annotations

import json
from typing import Any

from .dg import CDGPresentation, DividedPowerFamily, PresentationError, RingHom
from .graded import ParseError, Polynomial, Var, format_terms, parse_terms
from .pd import Char0Gamma, DividedPowerGamma, PDOracle, PDRejected, TableGamma


class DocumentError(ValueError):
    def __init__(self, message: str, path=(), line: int | None = None):
        self.message = message
        self.path = tuple(path)
        self.line = line
        super().__init__(self._text())

    def _text(self):
        where = "/".join(str(p) for p in self.path)
        loc = f"line {self.line}: " if self.line else ""
        return f"{loc}{where + ': ' if where else ''}{self.message}"

    def anchored(self, text: str) -> "DocumentError":
        return DocumentError(self.message, self.path, locate(text, self.path))


def locate(text: str, path) -> int:
    """Best-effort line of the value at ``path`` in a JSON text."""
    pos = 0
    for key in path:
        if isinstance(key, str):
            i = text.find(json.dumps(key), pos)
            if i < 0:
                break
            pos = i
        else:
            # k-th element of an array: step over k opening braces or values
            for _ in range(key + 1):
                i = text.find("{", pos + 1)
                if i < 0:
                    break
                pos = i
    return text.count("\n", 0, pos) + 1


def _expect(cond, msg, path):
    if not cond:
        raise DocumentError(msg, path)


def parse_term_list(doc, variables, path) -> Polynomial:
    try:
        return parse_terms(doc, variables)
    except ParseError as exc:
        raise DocumentError(str(exc), path) from exc


# rings ----------------------------------------------------------------------


def ring_from_json(doc: Any, path=()) -> CDGPresentation:
    _expect(isinstance(doc, dict), "ring document must be an object", path)
    unknown = set(doc) - {"coefficients", "variables", "differential", "rewrite", "label"}
    _expect(not unknown, f"unknown keys {sorted(unknown)}", path)
    coeffs = doc.get("coefficients", "Z")
    _expect(coeffs in ("Z", "Q"), "coefficients must be 'Z' or 'Q'", path + ("coefficients",))
    vs = doc.get("variables", [])
    _expect(isinstance(vs, list), "variables must be a list", path + ("variables",))
    variables = {}
    for k, v in enumerate(vs):
        p = path + ("variables", k)
        _expect(isinstance(v, dict) and set(v) == {"name", "degree"},
                "variable needs exactly 'name' and 'degree'", p)
        _expect(isinstance(v["name"], str) and v["name"], "name must be a nonempty string", p + ("name",))
        _expect(isinstance(v["degree"], int) and not isinstance(v["degree"], bool) and v["degree"] <= 0,
                "degree must be an integer <= 0", p + ("degree",))
        _expect(v["name"] not in variables, f"duplicate variable {v['name']!r}", p)
        variables[v["name"]] = Var((k,), v["name"], v["degree"])
    diff_doc = doc.get("differential", {})
    _expect(isinstance(diff_doc, dict), "differential must be an object", path + ("differential",))
    diff = {}
    for name, terms in diff_doc.items():
        p = path + ("differential", name)
        _expect(name in variables, f"differential of unknown variable {name!r}", p)
        diff[variables[name]] = parse_term_list(terms, variables, p)
    families = []
    rw = doc.get("rewrite")
    if rw is not None:
        rws = rw if isinstance(rw, list) else [rw]
        for k, fam in enumerate(rws):
            p = path + ("rewrite",) + ((k,) if isinstance(rw, list) else ())
            _expect(isinstance(fam, dict) and {"n", "members"} <= set(fam),
                    "rewrite family needs 'n' and 'members'", p)
            members = fam["members"]
            _expect(isinstance(members, list) and all(m in variables for m in members),
                    "members must list known variables x_1, x_2, ... in order", p + ("members",))
            comp = fam.get("companion")
            _expect(comp is None or comp in variables, "unknown companion", p + ("companion",))
            try:
                families.append(DividedPowerFamily(
                    fam.get("name", f"f{k}"), fam["n"], tuple(variables[m] for m in members),
                    variables[comp] if comp else None))
            except PresentationError as exc:
                raise DocumentError(str(exc), p) from exc
    try:
        return CDGPresentation(tuple(variables.values()), diff, tuple(families), coeffs,
                               label=doc.get("label", ""))
    except PresentationError as exc:
        raise DocumentError(str(exc), path) from exc


def ring_to_json(ring: CDGPresentation) -> dict:
    out = {
        "coefficients": ring.coefficients,
        "variables": [{"name": v.name, "degree": v.degree} for v in ring.variables],
        "differential": {v.name: format_terms(dv) for v, dv in ring.differential.items() if dv},
    }
    if ring.families:
        out["rewrite"] = [
            {"name": f.name, "n": f.n, "members": [v.name for v in f.members],
             **({"companion": f.companion.name} if f.companion else {})}
            for f in ring.families]
    if ring.label:
        out["label"] = ring.label
    return out


# homs -----------------------------------------------------------------------


def images_from_json(doc, source: CDGPresentation, target: CDGPresentation, path=()) -> dict:
    _expect(isinstance(doc, dict), "images must be an object", path)
    images = {}
    tnames = target.names
    for name, terms in doc.items():
        _expect(name in source.names, f"image of unknown source variable {name!r}", path + (name,))
        images[source[name]] = parse_term_list(terms, tnames, path + (name,))
    return images


def hom_from_json(doc, path=(), source=None, target=None) -> RingHom:
    _expect(isinstance(doc, dict), "hom document must be an object", path)
    if source is None:
        _expect("source" in doc, "missing 'source'", path)
        source = ring_from_json(doc["source"], path + ("source",))
    if target is None:
        _expect("target" in doc, "missing 'target'", path)
        target = ring_from_json(doc["target"], path + ("target",))
    _expect("images" in doc, "missing 'images'", path)
    images = images_from_json(doc["images"], source, target, path + ("images",))
    try:
        return RingHom(source, target, images, label=doc.get("label", ""))
    except PresentationError as exc:
        raise DocumentError(str(exc), path + ("images",)) from exc


def hom_to_json(phi: RingHom, embed: bool = True) -> dict:
    out = {"images": {v.name: format_terms(img) for v, img in phi.images.items()}}
    if embed:
        out = {"source": ring_to_json(phi.source), "target": ring_to_json(phi.target), **out}
    if phi.label:
        out["label"] = phi.label
    return out


# PD descriptors ---------------------------------------------------------------


def pd_from_json(doc, ring: CDGPresentation, path=()) -> PDOracle:
    _expect(isinstance(doc, dict) and "kind" in doc, "PD descriptor needs 'kind'", path)
    kind = doc["kind"]
    try:
        if kind == "char0":
            return Char0Gamma(ring)
        if kind == "dp-canonical":
            return DividedPowerGamma(ring)
        if kind == "table":
            tbl = doc.get("table", {})
            _expect(isinstance(tbl, dict), "table must be an object", path + ("table",))
            table = {}
            for name, row in tbl.items():
                p = path + ("table", name)
                _expect(isinstance(row, dict), "table row must be an object", p)
                entries = {}
                for k, terms in row.items():
                    _expect(str(k).isdigit(), f"gamma index {k!r} must be a nonnegative integer", p + (k,))
                    entries[int(k)] = parse_term_list(terms, ring.names, p + (k,))
                table[name] = entries
            return TableGamma(ring, table)
    except PDRejected as exc:
        raise DocumentError(str(exc), path) from exc
    raise DocumentError(f"unknown PD kind {kind!r}", path + ("kind",))


def pd_to_json(oracle: PDOracle) -> dict:
    out = {"kind": oracle.kind}
    if isinstance(oracle, TableGamma):
        out["table"] = {
            str(next(iter(a.variables())).name): {str(k): format_terms(v) for k, v in sorted(row.items())}
            for a, row in oracle.table.items()}
    return out


# factorization documents ------------------------------------------------------


def factorization_input_from_json(doc, window: int | None = None, cap: int | None = None,
                                  minimize: bool = False):
    from .factorization import FactorizationError, FactorizationInput

    _expect(isinstance(doc, dict), "input must be an object", ())
    for key in ("A", "B", "f", "pd"):
        _expect(key in doc, f"missing {key!r}", ())
    A = ring_from_json(doc["A"], ("A",))
    B = ring_from_json(doc["B"], ("B",))
    fdoc = doc["f"]
    _expect(isinstance(fdoc, dict), "'f' must be an object", ("f",))
    f = hom_from_json(fdoc if "images" in fdoc else {"images": fdoc}, ("f",), source=A, target=B)
    pd = pd_from_json(doc["pd"], B, ("pd",))
    floor = window if window is not None else doc.get("window", -10)
    _expect(isinstance(floor, int) and floor <= -2, "window must be an integer <= -2", ("window",))
    caps = doc.get("caps")
    if caps is not None:
        _expect(isinstance(caps, (dict, int)), "caps must be an object or integer", ("caps",))
    if cap is not None:
        caps = {"*": cap, **(caps if isinstance(caps, dict) else {})} if not isinstance(caps, int) else caps
    try:
        return FactorizationInput(A, B, f, pd, floor, caps, minimize)
    except FactorizationError as exc:
        raise DocumentError(str(exc), ()) from exc


def factorization_input_to_json(inp) -> dict:
    out = {"A": ring_to_json(inp.A), "B": ring_to_json(inp.B),
           "f": hom_to_json(inp.f, embed=False), "pd": pd_to_json(inp.pd), "window": inp.floor}
    if inp.caps is not None:
        out["caps"] = inp.caps
    return out


def result_to_json(res) -> dict:
    return {
        "rings": {"A": ring_to_json(res.input.A), "B": ring_to_json(res.input.B),
                  "C": ring_to_json(res.C), "Btilde": ring_to_json(res.Btilde)},
        "homs": {"e": hom_to_json(res.e, embed=False), "p": hom_to_json(res.p, embed=False),
                 "ftilde": hom_to_json(res.ftilde, embed=False),
                 "g_C": hom_to_json(res.g_C, embed=False)},
        "generators": {str(n): [format_terms(b) for b in bs]
                       for n, bs in sorted(res.selection.by_degree.items(), reverse=True)},
        "report": {k: r.to_json() for k, r in res.reports.items()},
        "ok": res.ok,
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, (), exc.lineno) from exc
