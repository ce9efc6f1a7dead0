"""Command-line front end.

Exit status: 0 on success, 1 on input errors, 2 when a golden file differs.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, pluecker, tables
from .exact import fmt
from .grading import Cocharacter, classify_short_gradings, equalized
from .rootsys import (
    ParseError,
    build_root_system,
    fundamental_weights,
    parse_diagram,
    parse_variety,
    DynkinDiagram,
)
from .tables import Table, render
from .torusact import exc_loci, fixed_components, xbar_report
from .weyl import CosetCapExceeded, longest_element

CACHE_ENV = "FLAGCREMONA_CACHE"
VERBS = ("roots", "short-gradings", "fixed-points", "table", "xbar", "exc", "verify-inversion", "verify-quadric", "report")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for golden mismatches
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=tables.FORMATS, default="markdown")
    p.add_argument("--cache", metavar="DIR", help=f"coset-table cache directory (default: ${CACHE_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flagcremona", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("roots", help="root system data of a diagram")
    p.add_argument("diagram")
    _common(p)

    p = sub.add_parser("short-gradings", help="nodes giving short gradings (table 1 rows)")
    p.add_argument("diagram", nargs="?")
    p.add_argument("--max-rank", type=int, default=10)
    _common(p)

    p = sub.add_parser("fixed-points", help="fixed components of a co-character action")
    p.add_argument("variety", help="marked variety, e.g. E7(7) or A1(1)+B3(1)")
    p.add_argument("--cochar", help="comma-separated nodes i1,i2,.. for sigma_i1 + sigma_i2 + ..")
    _common(p)

    p = sub.add_parser("table", help="regenerate one of the six tables")
    p.add_argument("ident", choices=sorted(tables.BUILDERS))
    p.add_argument("--max-rank", type=int)
    p.add_argument("--diff-golden", metavar="DIR")
    p.add_argument("--write-golden", metavar="DIR")
    _common(p)

    for verb, text in (("xbar", "fixed components on Xbar(J)"), ("exc", "exceptional loci of psi and its inverse")):
        p = sub.add_parser(verb, help=text)
        p.add_argument("diagram")
        p.add_argument("--node", type=int, required=True)
        _common(p)

    p = sub.add_parser("verify-inversion", help="random checks that the induced map is matrix inversion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--symmetric", action="store_true")
    kind.add_argument("--skew", action="store_true")
    _common(p)

    p = sub.add_parser("verify-quadric", help="random checks of the quadric map")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    _common(p)

    p = sub.add_parser("report", help="all six tables")
    p.add_argument("--max-rank", type=int)
    _common(p)
    return parser


def _cache(args) -> str | None:
    return args.cache or os.environ.get(CACHE_ENV) or None


def _cochar(args, v) -> Cocharacter:
    n = v.diagram.rank
    if not args.cochar:
        return Cocharacter.basic(n, *sorted(v.marked))
    try:
        nodes = [int(x) for x in args.cochar.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--cochar expects comma-separated node numbers, got {args.cochar!r}")
    return Cocharacter.basic(n, *nodes)


def cmd_roots(args) -> Table:
    d = parse_diagram(args.diagram)
    rs = build_root_system(d)
    lam = fundamental_weights(rs)
    w0 = longest_element(rs)
    t = Table("roots", f"Root system {d.literal}", ["item", "value"], params={"diagram": d.literal})
    t.rows.append(["positive roots", len(rs.positives)])
    t.rows.append(["highest roots", "; ".join(str(list(h)) for h in rs.highest_roots())])
    t.rows.append(["cartan", "; ".join(" ".join(str(int(x)) for x in row) for row in rs.cartan)])
    t.rows.append(["squared norms", " ".join(map(str, rs.norms))])
    t.rows.append(["symmetrizer", " ".join(map(str, rs.symmetrizer))])
    for j, l in enumerate(lam, 1):
        t.rows.append([f"lambda_{j}", " ".join(fmt(x) for x in l)])
    t.rows.append(["w0 is -id", bool(np.array_equal(w0.matrix, -np.eye(rs.rank, dtype=np.int64)))])
    for r in rs.positives:
        t.rows.append(["root", " ".join(map(str, r))])
    return t


def cmd_short(args) -> Table:
    if args.diagram is None:
        return tables.table1(args.max_rank)
    d = parse_diagram(args.diagram)
    t = Table("short", f"Short gradings of {d.literal}", ["component", "node", "transversal"], params={"diagram": d.literal})
    for idx, comp in enumerate(d.components):
        part = DynkinDiagram((comp,))
        for i, trans in classify_short_gradings(part):
            t.rows.append([f"{comp[0]}{comp[1]}", d.node(idx, i), trans.literal])
    return t


def _report_table(rep, title: str) -> Table:
    t = Table(
        "fixed",
        title,
        ["weight", "component", "dim", "nu_plus", "nu_minus", "hfixed", "rep"],
        params={"variety": rep.variety.literal, "cochar": str(rep.sigma)},
    )
    for c in rep.components:
        word = "".join(f"s{i}" for i in c.rep.word) if c.rep.word else "e"
        t.rows.append([c.weight, str(c.ctype), c.dim, c.nu_plus, c.nu_minus, c.hfixed, word])
    t.notes.append(
        f"dim X = {rep.dim}; bandwidth {rep.bandwidth}; criticality {rep.criticality}; "
        f"equalized {'yes' if rep.equalized else 'no'}; isolated sink {'yes' if rep.isolated_sink else 'no'}; "
        f"isolated source {'yes' if rep.isolated_source else 'no'}; H-fixed points {rep.hfixed}"
    )
    return t


def cmd_fixed(args) -> Table:
    v = parse_variety(args.variety)
    sigma = _cochar(args, v)
    rep = fixed_components(v, sigma, cache_dir=_cache(args))
    t = _report_table(rep, f"Fixed components of {sigma} on {v.literal}")
    if not equalized(v, sigma):
        t.notes.append("warning: the co-character is not short, so the action is not equalized")
    return t


def cmd_xbar(args) -> Table:
    d = parse_diagram(args.diagram)
    rep = xbar_report(d, args.node)
    return _report_table(rep, f"{rep.label} over {d.literal}, node {args.node}")


def cmd_exc(args) -> Table:
    d = parse_diagram(args.diagram)
    e = exc_loci(d, args.node)
    t = Table("exc", f"Exceptional loci for {d.literal}, node {args.node}", ["item", "value"], params={"diagram": d.literal})
    t.rows += [
        ["domain", str(e.domain)],
        ["dim", e.dim],
        ["exc_psi", tables._union(e.exc_psi)],
        ["exc_psi_inv", tables._union(e.exc_psi_inv)],
        ["isomorphism", e.is_isomorphism],
        ["source weight", e.source_weight],
    ]
    return t


def _verdicts(title: str, results: list[dict], params: dict) -> Table:
    cols = list(results[0]) if results else ["case", "pass"]
    t = Table("verify", title, cols, params=params)
    t.rows = [[r[c] for c in cols] for r in results]
    passed = sum(1 for r in results if r["pass"])
    t.notes.append(f"{passed}/{len(results)} pass")
    return t


def cmd_verify_inversion(args) -> Table:
    if args.n < 1 or args.count < 0:
        raise InputError("--n must be positive and --count nonnegative")
    kind = "symmetric" if args.symmetric else "skew" if args.skew else "general"
    if kind == "skew" and args.n % 2:
        raise InputError("skew matrices of odd size are singular; use an even --n")
    res = pluecker.verify_inversion(args.n, args.count, args.seed, kind)
    return _verdicts(f"Inversion checks, n={args.n}, {kind}", res, {"n": args.n, "seed": args.seed, "kind": kind})


def cmd_verify_quadric(args) -> Table:
    if args.dim < 1:
        raise InputError("--dim must be positive")
    res = pluecker.verify_quadric(args.dim, args.seed, args.count)
    return _verdicts(f"Quadric checks, dim={args.dim}", res, {"dim": args.dim, "seed": args.seed})


def cmd_table(args) -> Table:
    return tables.build(args.ident, args.max_rank, cache_dir=_cache(args))


def _emit(t: Table, args) -> int:
    text = render(t, args.format)
    sys.stdout.write(text)
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "roots": cmd_roots,
        "short-gradings": cmd_short,
        "fixed-points": cmd_fixed,
        "xbar": cmd_xbar,
        "exc": cmd_exc,
        "verify-inversion": cmd_verify_inversion,
        "verify-quadric": cmd_verify_quadric,
    }
    try:
        if args.verb == "report":
            for ident in sorted(tables.BUILDERS):
                t = tables.build(ident, args.max_rank, cache_dir=_cache(args))
                sys.stdout.write(render(t, args.format))
                if args.format != "json":
                    sys.stdout.write("\n")
            return 0
        if args.verb == "table":
            t = cmd_table(args)
            text = render(t, args.format)
            if args.write_golden:
                out = Path(args.write_golden)
                out.mkdir(parents=True, exist_ok=True)
                (out / tables.golden_name(t.ident, args.format)).write_text(text)
            if args.diff_golden:
                path = Path(args.diff_golden) / tables.golden_name(t.ident, args.format)
                if not path.exists():
                    raise InputError(
                        f"no golden file at {path}; bootstrap it with: "
                        f"flagcremona table {t.ident} --format {args.format} --write-golden {args.diff_golden}"
                    )
                diff = tables.diff_golden(text, path.read_text(), args.format)
                if not diff.equal:
                    sys.stderr.write(f"golden mismatch for table {t.ident} ({path}): {diff.describe()}\n")
                    return 2
                sys.stderr.write(f"table {t.ident} matches {path}\n")
            sys.stdout.write(text)
            return 0
        t = handlers[args.verb](args)
        return _emit(t, args)
    except (ParseError, InputError, CosetCapExceeded, ValueError) as exc:
        sys.stderr.write(f"flagcremona: error: {exc}\n")
        return 1


def main(argv=None) -> int:
    return run(argv)
