"""Builders for the six classification tables, their renderings and golden diffs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import __version__
from .exact import fmt
from .grading import Cocharacter, classify_short_gradings
from .rootsys import DynkinDiagram, MarkedVariety, VarietyType, parse_diagram
from .torusact import (
    ActionReport,
    classify_isolated_both,
    exc_loci,
    fixed_components,
    scan_types,
    sigma_plus,
    xbar_report,
)

FORMATS = ("markdown", "tsv", "json")
PROVENANCE_MARK = "# provenance"
TITLES = {
    1: "Short gradings of simple Lie algebras",
    2: "Equalized actions with an isolated extremal fixed point",
    3: "Equalized actions with isolated sink and source",
    4: "Induced action on the fibre over r_i P_i",
    5: "Fixed components of the action on Xbar(J)",
    6: "Special birational transformations of type (2,1)",
}


@dataclass
class Table:
    ident: str
    title: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]


# -- rendering --------------------------------------------------------------------------


def _cell(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, Fraction):
        return fmt(x)
    if x is None:
        return "-"
    return str(x)


def provenance(table: Table, fmt_name: str) -> dict:
    return {"engine": "flagcremona", "version": __version__, "table": table.ident, "format": fmt_name, **table.params}


def render(table: Table, fmt_name: str, footer: bool = True) -> str:
    if fmt_name == "json":
        doc = {
            "table": table.ident,
            "title": table.title,
            "columns": table.columns,
            "rows": [{c: _jsonable(v) for c, v in zip(table.columns, r)} for r in table.rows],
            "notes": table.notes,
        }
        if footer:
            doc["provenance"] = provenance(table, fmt_name)
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    lines = []
    if fmt_name == "tsv":
        lines.append("\t".join(table.columns))
        lines += ["\t".join(_cell(x) for x in r) for r in table.rows]
        lines += [f"# note\t{n}" for n in table.notes]
    elif fmt_name == "markdown":
        lines.append(f"### Table {table.ident}: {table.title}")
        lines.append("")
        lines.append("| " + " | ".join(table.columns) + " |")
        lines.append("|" + "|".join("---" for _ in table.columns) + "|")
        lines += ["| " + " | ".join(_cell(x) for x in r) + " |" for r in table.rows]
        if table.notes:
            lines.append("")
            lines += [f"- {n}" for n in table.notes]
    else:
        raise ValueError(f"unknown format {fmt_name!r}; choose from {', '.join(FORMATS)}")
    if footer:
        prov = provenance(table, fmt_name)
        lines.append(PROVENANCE_MARK)
        lines.append("# " + "; ".join(f"{k}={v}" for k, v in prov.items()))
    return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    return x


def payload(text: str, fmt_name: str) -> list[str]:
    """Lines of a rendered table with the provenance footer removed."""
    if fmt_name == "json":
        doc = json.loads(text)
        doc.pop("provenance", None)
        return json.dumps(doc, indent=2, ensure_ascii=False).splitlines()
    lines = text.splitlines()
    if PROVENANCE_MARK in lines:
        lines = lines[: lines.index(PROVENANCE_MARK)]
    return lines


@dataclass(frozen=True)
class GoldenDiff:
    equal: bool
    line: int | None = None
    generated: str | None = None
    stored: str | None = None

    def describe(self) -> str:
        if self.equal:
            return ""
        return f"first difference at payload line {self.line}:\n  generated: {self.generated}\n  stored:    {self.stored}"


def diff_golden(generated: str, stored: str, fmt_name: str) -> GoldenDiff:
    a, b = payload(generated, fmt_name), payload(stored, fmt_name)
    if a == b:
        return GoldenDiff(True)
    for k in range(max(len(a), len(b))):
        x = a[k] if k < len(a) else "<end of table>"
        y = b[k] if k < len(b) else "<end of table>"
        if x != y:
            return GoldenDiff(False, k + 1, x, y)
    raise AssertionError("unreachable")


def golden_name(ident: str, fmt_name: str) -> str:
    ext = {"markdown": "md", "tsv": "tsv", "json": "json"}[fmt_name]
    return f"table{ident}.{ext}"


# -- polynomial fits for symbolic rows ------------------------------------------------------


def fit_polynomial(points: Sequence[tuple[int, int]], max_degree: int = 3) -> list[Fraction] | None:
    """Lowest-degree polynomial through all points, confirmed by at least one spare point."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return None
    for d in range(0, min(max_degree, len(pts) - 2) + 1):
        base = pts[: d + 1]
        coeffs = _interpolate(base)
        if all(_evaluate(coeffs, x) == y for x, y in pts):
            return coeffs
    return None


def _interpolate(pts) -> list[Fraction]:
    # Newton form, expanded into monomial coefficients
    xs = [Fraction(x) for x, _ in pts]
    dd = [Fraction(y) for _, y in pts]
    for j in range(1, len(pts)):
        for i in range(len(pts) - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [Fraction(0)] * len(pts)
    basis = [Fraction(1)]
    for k, c in enumerate(dd):
        for p, b in enumerate(basis):
            coeffs[p] += c * b
        if k < len(xs) - 1:
            nxt = [Fraction(0)] * (len(basis) + 1)
            for p, b in enumerate(basis):
                nxt[p + 1] += b
                nxt[p] -= xs[k] * b
            basis = nxt
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _evaluate(coeffs, x) -> Fraction:
    return sum((c * Fraction(x) ** p for p, c in enumerate(coeffs)), Fraction(0))


def format_polynomial(coeffs: Sequence[Fraction] | None, var: str = "n") -> str:
    if coeffs is None:
        return "n/a (fewer than 3 ranks)"
    terms = []
    for p in range(len(coeffs) - 1, -1, -1):
        c = coeffs[p]
        if c == 0:
            continue
        mono = "" if p == 0 else (var if p == 1 else f"{var}^{p}")
        if mono and abs(c) == 1:
            body = mono
        elif mono:
            body = f"{fmt(abs(c))}*{mono}"
        else:
            body = fmt(abs(c))
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# -- the tables -----------------------------------------------------------------------------


def _union(types: Sequence[VarietyType]) -> str:
    return " | ".join(map(str, types)) if types else "empty"


def table1(max_rank: int = 10) -> Table:
    t = Table("1", TITLES[1], ["type", "rank", "nodes", "transversal"], params={"max_rank": max_rank})
    types = [("A", n) for n in range(1, max_rank + 1)]
    types += [("B", n) for n in range(2, max_rank + 1)]
    types += [("C", n) for n in range(2, max_rank + 1)]
    types += [("D", n) for n in range(3, max_rank + 1)]
    types += [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
    for letter, rank in types:
        res = classify_short_gradings(DynkinDiagram(((letter, rank),)))
        t.rows.append(
            [letter, rank, ",".join(str(i) for i, _ in res) or "none", "; ".join(d.literal for _, d in res) or "-"]
        )
    t.notes.append("transversal: the diagram left after deleting the node, components in Bourbaki numbering")
    return t


def table2_cases(max_rank: int = 8) -> list[tuple[str, str, int]]:
    """(row label, variety literal, co-character node)."""
    cases = []
    for n in range(1, max_rank + 1):
        for i in range(1, n + 1):
            cases.append(("A_n(i)", f"A{n}({i})", i))
    for n in range(1, max_rank + 1):
        for i in range(1, n + 1):
            cases.append(("A_n(n+1-i)", f"A{n}({n + 1 - i})", i))
    cases += [("C_n(n)", f"C{n}({n})", n) for n in range(2, max_rank + 1)]
    cases += [("B_n(1)", f"B{n}(1)", 1) for n in range(2, max_rank + 1)]
    cases += [("D_n(1)", f"D{n}(1)", 1) for n in range(4, max_rank + 1)]
    cases += [("D_n(n)", f"D{n}({n})", n) for n in range(4, max_rank + 1)]
    # sigma_n has an isolated extremal point on D_n(n-1) only for n odd; for n even use sigma_{n-1}
    cases += [("D_n(n-1)", f"D{n}({n - 1})", n if n % 2 else n - 1) for n in range(4, max_rank + 1)]
    cases += [("E6(1)", "E6(1)", 1), ("E6(6)", "E6(6)", 1), ("E7(7)", "E7(7)", 7)]
    return cases


def report_for(literal: str, node: int, cache_dir=None) -> ActionReport:
    from .rootsys import parse_variety

    v = parse_variety(literal)
    return fixed_components(v, Cocharacter.basic(v.diagram.rank, node), cache_dir=cache_dir)


def table2(max_rank: int = 8, cache_dir=None) -> Table:
    t = Table(
        "2",
        TITLES[2],
        ["row", "variety", "cochar", "weight", "component", "dim", "nu_plus", "nu_minus", "hfixed"],
        params={"max_rank": max_rank},
    )
    for label, lit, node in table2_cases(max_rank):
        rep = report_for(lit, node, cache_dir)
        for c in rep.components:
            t.rows.append([label, lit, f"s{node}", c.weight, str(c.ctype), c.dim, c.nu_plus, c.nu_minus, c.hfixed])
    t.notes.append("weights of the ample generator, shifted so the sink has weight 0; pt marks a point")
    return t


def table3(max_rank: int = 8) -> Table:
    t = Table("3", TITLES[3], ["family", "n", "variety", "dimension", "delta"], params={"max_rank": max_rank})
    rows = classify_isolated_both(max_rank)
    fams: dict[str, list] = {}
    for r in rows:
        t.rows.append([r.family, r.n, r.literal, r.dim, r.delta])
        fams.setdefault(r.family, []).append(r)
    for fam, rs in fams.items():
        dim_fit = fit_polynomial([(r.n, r.dim) for r in rs])
        delta_fit = fit_polynomial([(r.n, r.delta) for r in rs])
        t.rows.append([fam, "symbolic", "derived", format_polynomial(dim_fit), format_polynomial(delta_fit)])
    t.notes.append("symbolic rows are exact polynomial fits over the concrete ranks above (derived)")
    return t


def derived_cases(max_rank: int = 8) -> list[tuple[str, str, int]]:
    """(row label, diagram literal, node) for the varieties Xbar(J)."""
    cases = []
    for n in range(3, max_rank + 1):
        for i in range(2, n):
            cases.append(("A_n(i)", f"A{n}", i))
    cases += [("C_n(n)", f"C{n}", n) for n in range(2, max_rank + 1)]
    cases += [("B_n(1)", f"B{n}", 1) for n in range(3, max_rank + 1)]
    cases += [("D_n(1)", f"D{n}", 1) for n in range(4, max_rank + 1)]
    cases += [("D_n(n)", f"D{n}", n) for n in range(4, max_rank + 1)]
    cases += [("E6(1)", "E6", 1), ("E7(7)", "E7", 7)]
    return cases


def table4(max_rank: int = 8) -> Table:
    t = Table("4", TITLES[4], ["row", "diagram", "node", "D_i", "sigma_plus", "J"], params={"max_rank": max_rank})
    for label, lit, i in derived_cases(max_rank):
        sp = sigma_plus(parse_diagram(lit), i)
        t.rows.append([label, lit, i, sp.diagram.literal, str(sp.sigma), ",".join(map(str, sorted(sp.J)))])
    t.notes.append("sigma_plus is written in the labels of D_i; J in the labels of the original diagram")
    return t


def table5(max_rank: int = 8) -> Table:
    t = Table("5", TITLES[5], ["row", "diagram", "node", "Y0", "Y1", "Y2", "source", "source_weight"], params={"max_rank": max_rank})
    for label, lit, i in derived_cases(max_rank):
        d = parse_diagram(lit)
        rep = xbar_report(d, i)
        e = exc_loci(d, i, rep)
        src = rep.source
        t.rows.append(
            [label, lit, i, str(e.domain), _union(e.exc_psi), _union(e.exc_psi_inv), _union([c.ctype for c in src]), e.source_weight]
        )
    t.notes.append("Y1 and Y2 are the inner components of weights 1 and 2; the source is listed separately")
    return t


def table6(max_rank: int = 8) -> Table:
    t = Table(
        "6", TITLES[6], ["row", "diagram", "node", "domain", "dim", "exc_psi", "exc_psi_inv", "isomorphism"], params={"max_rank": max_rank}
    )
    per_family: dict[str, list] = {}
    for label, lit, i in derived_cases(max_rank):
        d = parse_diagram(lit)
        e = exc_loci(d, i)
        t.rows.append([label, lit, i, str(e.domain), e.dim, _union(e.exc_psi), _union(e.exc_psi_inv), e.is_isomorphism])
        per_family.setdefault(label, []).append((d.rank, e.dim))
    for label, pts in per_family.items():
        ns = {}
        for n, dim in pts:
            ns.setdefault(n, set()).add(dim)
        if all(len(v) == 1 for v in ns.values()):
            fit = fit_polynomial([(n, v.pop()) for n, v in ns.items()])
            if fit is not None:
                t.rows.append([label, "symbolic", "-", "derived", format_polynomial(fit), "-", "-", "-"])
    t.notes.append("symbolic rows fit dim as a polynomial in the rank n of the original diagram (derived)")
    return t


BUILDERS: dict[str, Callable[..., Table]] = {
    "1": table1,
    "2": table2,
    "3": table3,
    "4": table4,
    "5": table5,
    "6": table6,
}


def build(ident: str, max_rank: int | None = None, cache_dir=None) -> Table:
    if ident not in BUILDERS:
        raise ValueError(f"unknown table {ident!r}; choose 1..6")
    kwargs = {}
    if max_rank is not None:
        kwargs["max_rank"] = max_rank
    if ident == "2":
        kwargs["cache_dir"] = cache_dir
    return BUILDERS[ident](**kwargs)
