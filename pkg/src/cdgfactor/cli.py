"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a verification failure,
2 on input or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .complexes import (CapError, InsufficientWindow, check_d_squared_window, check_exact_sequences,
                        check_chain_map, cohomology_table, expand, hom_window)
from .demos import DEMOS, DemoUsageError, run_demo
from .dg import PresentationError, check_d_squared, check_hom_is_dg
from .factorization import FactorizationError, factorize
from .graded import ParseError
from .io import (DocumentError, dumps, factorization_input_from_json, hom_from_json, loads,
                 pd_from_json, result_to_json, ring_from_json, parse_term_list)
from .pd import PDRejected, check_pd

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_at_most(limit):
    def parse(s):
        v = int(s)
        if v > limit:
            raise argparse.ArgumentTypeError(f"must be <= {limit}")
        return v
    return parse


def _int_at_least(limit):
    def parse(s):
        v = int(s)
        if v < limit:
            raise argparse.ArgumentTypeError(f"must be >= {limit}")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=_int_at_most(-2), default=None,
                        help="window floor (<= -2, default -10)")
    common.add_argument("--cap", type=_int_at_least(1), default=None,
                        help="exponent cap for degree-0 variables (default 6)")
    common.add_argument("--out", type=Path, help="write JSON output here (a directory for demo)")
    common.add_argument("--format", choices=("json", "text"), default="text")

    ap = argparse.ArgumentParser(prog="cdgfactor", description="Factor quasi-isomorphisms of CDG rings.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo", parents=[common], help="materialize and verify a named construction")
    p.add_argument("name", choices=DEMOS)
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--minimize", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("cohomology", parents=[common], help="cohomology table of a ring")
    p.add_argument("ring", type=Path)

    p = sub.add_parser("verify-ring", parents=[common], help="d^2 = 0 and exactness checks")
    p.add_argument("ring", type=Path)

    p = sub.add_parser("verify-hom", parents=[common], help="check a hom commutes with d")
    p.add_argument("hom", type=Path)

    p = sub.add_parser("pd-check", parents=[common], help="check the PD axioms on listed elements")
    p.add_argument("input", type=Path)
    p.add_argument("--kmax", type=_int_at_least(1), default=4)
    p.add_argument("--lmax", type=_int_at_least(1), default=4)

    p = sub.add_parser("factorize", parents=[common], help="run the factorization pipeline")
    p.add_argument("input", type=Path)
    p.add_argument("--minimize", action="store_true", help="drop lattice-redundant generators")
    return ap


def _read(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    try:
        return text, loads(text)
    except DocumentError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _parse(path, text, fn):
    try:
        return fn()
    except DocumentError as exc:
        raise UsageError(f"{path}: {exc.anchored(text) if exc.line is None else exc}") from exc


def _caps(args):
    return {"*": 6 if args.cap is None else args.cap}


def _window(args):
    return -10 if args.window is None else args.window


def _emit(args, doc: dict, reports: list, summary: list) -> int:
    ok = all(r.ok for r in reports)
    if args.out is not None and args.command != "demo":
        args.out.write_text(dumps(doc))
    if args.format == "json":
        sys.stdout.write(dumps(doc))
    else:
        for line in summary:
            print(line)
        for r in reports:
            print(r.render())
        tainted = sum(len(r.tainted) for r in reports)
        note = f" ({tainted} cap-tainted entries excluded from the verdict)" if tainted else ""
        print(("ALL PASS" if ok else "FAILED: " + ", ".join(r.check for r in reports if not r.ok)) + note)
    return EXIT_OK if ok else EXIT_FAIL


def _report_doc(reports, **extra):
    return {**extra, "report": {r.check: r.to_json() for r in reports},
            "ok": all(r.ok for r in reports)}


def cmd_demo(args) -> int:
    try:
        run = run_demo(args.name, args.n, _window(args), _caps(args)["*"], args.minimize)
    except DemoUsageError as exc:
        raise UsageError(str(exc)) from exc
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for stem, doc in sorted(run.documents.items()):
            (args.out / f"{args.name}_{stem}.json").write_text(dumps(doc))
    doc = _report_doc(run.reports, demo=args.name, summary=run.summary)
    return _emit(args, doc, run.reports, run.summary)


def _load_ring(args):
    text, doc = _read(args.ring)
    return _parse(args.ring, text, lambda: ring_from_json(doc))


def cmd_cohomology(args) -> int:
    ring = _load_ring(args)
    M = expand(ring, _window(args), _caps(args))
    table = cohomology_table(M)
    summary = ["ranks: " + ", ".join(f"{i}:{M.rank(i)}" for i in reversed(M.degrees))]
    summary += [f"H^{i} = {g}{' (cap-tainted)' if M.tainted(i) else ''}"
               for i, g in sorted(table.items(), reverse=True)]
    doc = {"ranks": {str(i): M.rank(i) for i in M.degrees},
           "cohomology": {str(i): {**g.to_json(), "cap_tainted": M.tainted(i)}
                          for i, g in sorted(table.items(), reverse=True)}}
    if args.format == "json":
        sys.stdout.write(dumps(doc))
    else:
        print("\n".join(summary))
    if args.out is not None:
        args.out.write_text(dumps(doc))
    return EXIT_OK


def cmd_verify_ring(args) -> int:
    ring = _load_ring(args)
    M = expand(ring, _window(args), _caps(args))
    reports = [check_d_squared(ring), check_d_squared_window(M), check_exact_sequences(M)]
    return _emit(args, _report_doc(reports), reports, [])


def cmd_verify_hom(args) -> int:
    text, doc = _read(args.hom)
    phi = _parse(args.hom, text, lambda: hom_from_json(doc))
    floor, caps = _window(args), _caps(args)
    reports = [check_hom_is_dg(phi),
               check_chain_map(hom_window(phi, expand(phi.source, floor, caps), expand(phi.target, floor, caps)))]
    return _emit(args, _report_doc(reports), reports, [])


def cmd_pd_check(args) -> int:
    text, doc = _read(args.input)

    def parse():
        if not isinstance(doc, dict) or not {"ring", "pd", "elements"} <= set(doc):
            raise DocumentError("pd-check input needs 'ring', 'pd' and 'elements'")
        ring = ring_from_json(doc["ring"], ("ring",))
        oracle = pd_from_json(doc["pd"], ring, ("pd",))
        if not isinstance(doc["elements"], list):
            raise DocumentError("elements must be a list of term lists", ("elements",))
        elems = [parse_term_list(t, ring.names, ("elements", k)) for k, t in enumerate(doc["elements"])]
        return oracle, [ring.reduce(a) for a in elems]

    oracle, elems = _parse(args.input, text, parse)
    reports = [check_pd(oracle, elems, args.kmax, args.lmax)]
    return _emit(args, _report_doc(reports), reports, [])


def cmd_factorize(args) -> int:
    text, doc = _read(args.input)
    inp = _parse(args.input, text, lambda: factorization_input_from_json(
        doc, args.window, args.cap, args.minimize))
    res = factorize(inp)
    out = result_to_json(res)
    reports = list(res.reports.values())
    summary = [f"window [{inp.floor}, 0], {len(res.blocks)} blocks: " + ", ".join(b.name for b in res.blocks),
               "B~ ranks: " + ", ".join(f"{i}:{r}" for i, r in sorted(
                   expand(res.Btilde, inp.floor, inp.caps).ranks().items(), reverse=True))]
    return _emit(args, out, reports, summary)


COMMANDS = {
    "demo": cmd_demo, "cohomology": cmd_cohomology, "verify-ring": cmd_verify_ring,
    "verify-hom": cmd_verify_hom, "pd-check": cmd_pd_check, "factorize": cmd_factorize,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, CapError, InsufficientWindow, FactorizationError, PDRejected,
            PresentationError, ParseError, DocumentError) as exc:
        print(f"cdgfactor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
