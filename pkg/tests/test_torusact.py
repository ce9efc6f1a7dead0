from __future__ import annotations

from collections import Counter

import pytest

from flagcremona.grading import Cocharacter
from flagcremona.rootsys import build_root_system, fundamental_weights, parse_diagram, parse_variety, weight_sum
from flagcremona.torusact import (
    Linearization,
    WeightError,
    classify_isolated_both,
    exc_loci,
    fixed_components,
    fundamental_locus,
    isolated_endpoints,
    mu,
    product_report,
    sigma_plus,
    tangent_weights,
    xbar_report,
)
from flagcremona.weyl import WeylElement, group_order, longest_element

import checks
import reference_tables as pt


def report(lit, *nodes):
    v = parse_variety(lit)
    return fixed_components(v, Cocharacter.basic(v.diagram.rank, *(nodes or sorted(v.marked))))


def summary(rep):
    return [(w, t) for w, t in rep.summary()]


def test_mu_examples():
    rs = build_root_system(parse_diagram("A3"))
    lam = weight_sum(rs, {2})
    s2 = Cocharacter.basic(3, 2)
    assert mu(WeylElement.identity(rs), lam, s2) == 0
    assert mu(longest_element(rs), lam, s2) == 2
    E7 = build_root_system(parse_diagram("E7"))
    assert mu(longest_element(E7), weight_sum(E7, {7}), Cocharacter.basic(7, 7)) == 3


def test_mu_rejects_a_wrong_weight():
    rs = build_root_system(parse_diagram("A2"))
    half = tuple(x / 2 for x in fundamental_weights(rs)[0])
    with pytest.raises(WeightError):
        mu(longest_element(rs), half, Cocharacter.basic(2, 1))


def test_tangent_weight_examples():
    v = parse_variety("A3(2)")
    rs = build_root_system(v.diagram)
    s2 = Cocharacter.basic(3, 2)
    assert tangent_weights(WeylElement.identity(rs), v, s2) == (-1,) * 4
    assert tangent_weights(longest_element(rs), v, s2) == (1,) * 4
    rep = report("C3(3)")
    (y1,) = rep.stratum(1)
    assert Counter(y1.tangent)[0] == 2 == y1.dim


def test_fixed_component_examples():
    assert summary(report("C3(3)")) in (
        [(0, "pt"), (1, "A2(1)"), (2, "A2(2)"), (3, "pt")],
        [(0, "pt"), (1, "A2(2)"), (2, "A2(1)"), (3, "pt")],
    )
    assert summary(report("A3(2)")) == [(0, "pt"), (1, "A1(1)+A1(1)"), (2, "pt")]
    e7 = report("E7(7)")
    assert [w for w, _ in summary(e7)] == [0, 1, 2, 3]
    assert {t for _, t in summary(e7)} == {"pt", "E6(1)", "E6(6)"}
    assert [c.dim for c in e7.components] == [0, 16, 16, 0]


def test_report_fields():
    rep = report("E7(7)")
    assert rep.bandwidth == rep.criticality == 3
    assert rep.equalized and rep.isolated_sink and rep.isolated_source
    assert rep.hfixed == 56
    rep = report("E7(1)")
    assert not rep.equalized


def test_linearization_offset():
    v = parse_variety("A3(2)")
    rs = build_root_system(v.diagram)
    L = Linearization(weight_sum(rs, {2}), offset=-5)
    rep = fixed_components(v, Cocharacter.basic(3, 2), L)
    assert [c.weight for c in rep.components] == [5, 6, 7]
    assert rep.bandwidth == 2


@pytest.mark.parametrize(
    "lit,node,expect",
    [("A3(2)", 2, (True, True)), ("A3(1)", 1, (True, False)), ("D6(6)", 6, (True, True)), ("A4(4)", 1, (False, True))],
)
def test_isolated_endpoints(lit, node, expect):
    v = parse_variety(lit)
    assert isolated_endpoints(v, Cocharacter.basic(v.diagram.rank, node)) == expect


def test_isolated_source_case_list_type_a():
    # source isolated iff I = {n+1-i}
    for n in range(1, 7):
        for i in range(1, n + 1):
            for k in range(1, n + 1):
                v = parse_variety(f"A{n}({k})")
                sink, source = isolated_endpoints(v, Cocharacter.basic(n, i))
                assert sink == (k == i)
                assert source == (k == n + 1 - i)


def test_isolated_both_scan():
    rows = classify_isolated_both(8)
    got = {(r.family, r.n) for r in rows}
    assert got == pt.table3_members(8)
    for r in rows:
        dim, delta = pt.TABLE3[r.family]
        assert (r.dim, r.delta) == (dim(r.n), delta(r.n))
    by_lit = {r.literal: r for r in rows}
    assert (by_lit["B4(1)"].dim, by_lit["B4(1)"].delta) == (7, 2)
    assert (by_lit["D6(6)"].dim, by_lit["D6(6)"].delta) == (15, 3)
    assert "D5(5)" not in by_lit
    with pytest.raises(ValueError):
        classify_isolated_both(7)


def test_quadro_quadric_bandwidth():
    for lit, node in [("A5(3)", 3), ("C3(3)", 3), ("D6(6)", 6), ("E7(7)", 7)]:
        assert report(lit, node).bandwidth == 3


@pytest.mark.parametrize("case", checks.table2_cases(max_a=5, max_c=4, max_bd=6), ids=lambda c: f"{c[0]}-{c[1]}-s{c[2]}")
def test_table2_row(case):
    errors, (rep,) = checks.check_table2([case])
    assert not errors
    assert rep.criticality == rep.bandwidth
    for c in rep.components:
        assert c.nu_plus + c.nu_minus + c.dim == rep.dim
        assert 0 <= c.weight <= rep.bandwidth
        assert set(c.tangent) <= {-1, 0, 1}
    sinks, sources = rep.sink, rep.source
    assert all(c.nu_plus == 0 for c in sinks) and all(c.nu_minus == 0 for c in sources)
    inner = [c for c in rep.components if c not in sinks and c not in sources]
    assert all(c.nu_plus and c.nu_minus for c in inner)
    rs = build_root_system(rep.variety.diagram)
    assert rep.hfixed == group_order(rs) // group_order(rs, set(rs.diagram.nodes) - rep.variety.marked)


def test_product_matches_direct_computation():
    a = report("A1(1)")
    b = report("B3(1)")
    prod = product_report([a, b])
    direct = report("A1(1)+B3(1)", 1, 2)
    assert len(prod.components) == 6
    key = lambda r: sorted((c.weight, str(c.ctype), c.dim, c.nu_plus, c.nu_minus, c.hfixed) for c in r.components)
    assert key(prod) == key(direct)
    assert prod.bandwidth == 3 and prod.criticality == 3
    assert product_report([a]) is a


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_fundamental_locus_of_line_times_quadric(n):
    # P^1 x Q^n with Q^n = B_k(1) or D_k(1)
    q = f"B{(n + 1) // 2}(1)" if n % 2 else f"D{n // 2 + 1}(1)"
    prod = product_report([report("A1(1)"), report(q, 1)])
    locus = fundamental_locus(prod)
    got = sorted(str(pt.canon(c.ctype)) for c in locus)
    assert got == sorted(["pt", str(pt.canon(pt.quadric(n - 2)))])


def test_sigma_plus_examples():
    sp = sigma_plus(parse_diagram("E7"), 7)
    assert (sp.diagram.literal, str(sp.sigma), set(sp.J)) == ("E6", "s6", {1})
    for n in range(3, 7):
        sp = sigma_plus(parse_diagram(f"C{n}"), n)
        assert (sp.diagram.literal, str(sp.sigma), set(sp.J)) == (f"A{n - 1}", f"s{n - 1}", {1})
    sp = sigma_plus(parse_diagram("A6"), 3)
    assert (sp.diagram.literal, str(sp.sigma), set(sp.J)) == ("A2+A3", "s2+s3", {1, 6})
    with pytest.raises(ValueError):
        sigma_plus(parse_diagram("E7"), 1)


def test_table4_rows():
    assert checks.check_table4(checks.xbar_cases(7)) == []


def test_xbar_examples():
    rep = xbar_report(parse_diagram("E7"), 7)
    assert [(c.weight, str(pt.canon(c.ctype))) for c in rep.components] == [
        (0, "E6(1)"),
        (1, "D5(1)"),
        (2, str(pt.canon(pt.factor("D", 5, 5)))),
        (3, "pt"),
    ]
    rep = xbar_report(parse_diagram("B5"), 1)
    assert [(c.weight, str(c.ctype)) for c in rep.components] == [(0, "B4(1)"), (1, "pt"), (2, "B3(1)"), (3, "pt")]
    for c in rep.components:
        assert c.nu_plus + c.nu_minus + c.dim == rep.dim


def test_c_row_is_an_isomorphism():
    rep = xbar_report(parse_diagram("C4"), 4)
    e = exc_loci(parse_diagram("C4"), 4, rep)
    assert e.is_isomorphism and e.exc_psi_inv == ()
    assert [str(t) for t in e.exc_psi] == ["A2(1)"]
    # the source sits at weight 2 under L_i + L_j, not 3 (see the notes)
    assert e.source_weight == 2


def test_exc_examples():
    e = exc_loci(parse_diagram("E6"), 1)
    assert (e.dim, [str(t) for t in e.exc_psi]) == (10, ["A4(1)"])
    assert [str(pt.canon(t)) for t in e.exc_psi_inv] == [str(pt.canon(pt.factor("A", 4, 3)))]
    # the domain E6(1) row: psi contracts D5(1) and its inverse D5(5)
    e = exc_loci(parse_diagram("E7"), 7)
    assert e.dim == 16
    assert [str(pt.canon(t)) for t in e.exc_psi] == ["D5(1)"]
    assert [str(pt.canon(t)) for t in e.exc_psi_inv] == ["D5(4)"]
    e = exc_loci(parse_diagram("D7"), 7)
    assert str(pt.canon(e.domain)) == str(pt.canon(pt.factor("A", 6, 2)))
    assert [str(pt.canon(t)) for t in e.exc_psi_inv] == [str(pt.canon(pt.factor("A", 1, 1) * pt.factor("A", 4, 1)))]


@pytest.mark.parametrize("case", checks.xbar_cases(7), ids=lambda c: f"{c[1]}-{c[2]}")
def test_tables56_rows_other_than_source_weight(case):
    errors, (rep,) = checks.check_tables56([case])
    if case[0] == "C_n(n)":
        errors = [e for e in errors if "source at weight" not in e]
    assert not errors
    for c in rep.components:
        assert c.nu_plus + c.nu_minus + c.dim == rep.dim
        assert set(c.tangent) <= {-1, 0, 1}
