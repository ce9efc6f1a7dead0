"""Fixed-point data of C*-actions on rational homogeneous varieties.

A co-character sigma acts on D(I) = G/P.  The H-fixed points are the cosets
wP, and the C*-fixed components are the orbits of the Weyl group of the
zero set K of sigma acting on W/W(D minus I).

Sign convention: tangent weights at the sink are all -1.  ``nu_plus``
counts positive tangent weights and ``nu_minus`` negative ones, so the sink
has nu_plus = 0 and the source has nu_minus = 0.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import prod
from typing import Sequence

import numpy as np

from .grading import Cocharacter, classify_short_gradings
from .rootsys import (
    DynkinDiagram,
    MarkedVariety,
    RootSystem,
    VarietyType,
    Weight,
    build_root_system,
    fundamental_weights,
    marked_type,
    subdiagram,
    variety_dimension,
    weight_sum,
)
from .weyl import WeylElement, cached_coset_table, double_coset_orbits, min_coset_reps, simple_reflection


class WeightError(ArithmeticError):
    """sigma(lambda - w lambda) was not an integer: lambda does not fit the variety."""


@dataclass(frozen=True)
class Linearization:
    weight: Weight
    offset: int | None = None  # None: shift so that the smallest weight is 0


@dataclass(frozen=True)
class FixedComponent:
    rep: WeylElement
    ctype: VarietyType
    weight: int
    dim: int
    nu_plus: int
    nu_minus: int
    hfixed: int
    marks: frozenset[int] = frozenset()
    tangent: tuple[int, ...] = ()

    @property
    def is_point(self) -> bool:
        return self.dim == 0


@dataclass(frozen=True)
class ActionReport:
    variety: MarkedVariety
    sigma: Cocharacter
    components: tuple[FixedComponent, ...]
    dim: int
    label: str = ""

    @property
    def weights(self) -> list[int]:
        return sorted({c.weight for c in self.components})

    @property
    def bandwidth(self) -> int:
        return max(c.weight for c in self.components) - min(c.weight for c in self.components)

    @property
    def criticality(self) -> int:
        return len(self.weights) - 1

    @property
    def equalized(self) -> bool:
        return all(abs(t) <= 1 for c in self.components for t in c.tangent)

    def stratum(self, weight: int) -> list[FixedComponent]:
        return [c for c in self.components if c.weight == weight]

    def _extremal(self, weight: int) -> bool:
        s = self.stratum(weight)
        return len(s) == 1 and s[0].dim == 0

    @property
    def isolated_sink(self) -> bool:
        return self._extremal(min(self.weights))

    @property
    def isolated_source(self) -> bool:
        return self._extremal(max(self.weights))

    @property
    def sink(self) -> list[FixedComponent]:
        return self.stratum(min(self.weights))

    @property
    def source(self) -> list[FixedComponent]:
        return self.stratum(max(self.weights))

    @property
    def hfixed(self) -> int:
        return sum(c.hfixed for c in self.components)

    def summary(self) -> list[tuple[int, str]]:
        return [(c.weight, str(c.ctype)) for c in self.components]


def mu(w: WeylElement, lam: Weight, sigma: Cocharacter) -> int:
    """sigma(lambda - w(lambda)), which must be an integer."""
    diff = tuple(Fraction(a) - b for a, b in zip(lam, w.act(lam)))
    val = Fraction(sigma(diff))
    if val.denominator != 1:
        raise WeightError(f"sigma(lambda - w lambda) = {val} is not an integer")
    return int(val)


def _tangent_roots(rs: RootSystem, marked) -> np.ndarray:
    idx = [m - 1 for m in sorted(marked)]
    p = rs.positive_array
    return p[p[:, idx].sum(axis=1) > 0]


def _tangent(w: WeylElement, roots: np.ndarray, sigma: Cocharacter) -> tuple[int, ...]:
    if not len(roots):
        return ()
    img = roots @ w.matrix.T
    vals = -(img @ np.asarray(sigma.values, dtype=np.int64))
    return tuple(sorted(int(x) for x in vals))


def tangent_weights(w: WeylElement, v: MarkedVariety, sigma: Cocharacter) -> tuple[int, ...]:
    """{sigma(w a) : a negative, supp(a) meets I}, sorted."""
    rs = build_root_system(v.diagram)
    return _tangent(w, _tangent_roots(rs, v.marked), sigma)


def _in_parabolic(root, J: frozenset[int]) -> bool:
    return all(not x or (k + 1) in J for k, x in enumerate(root))


def _component(rs, w, orbit_size, K, J, lam, sigma, roots, extra=()) -> tuple:
    raw = mu(w, lam, sigma)
    tw = tuple(sorted(_tangent(w, roots, sigma) + tuple(extra)))
    winv = w.inverse()
    marks = frozenset(
        k for k in K if not _in_parabolic(winv.act(tuple(int(x == k - 1) for x in range(rs.rank))), J)
    )
    ctype = marked_type(rs.diagram, K, marks)
    c = Counter(tw)
    pos = sum(v for t, v in c.items() if t > 0)
    neg = sum(v for t, v in c.items() if t < 0)
    return raw, dict(rep=w, ctype=ctype, dim=c[0], nu_plus=pos, nu_minus=neg, hfixed=orbit_size, marks=marks, tangent=tw)


def _finish(raw: list[tuple[int, dict]], L: Linearization | None) -> list[FixedComponent]:
    offset = min(r for r, _ in raw) if L is None or L.offset is None else L.offset
    comps = [FixedComponent(weight=r - offset, **kw) for r, kw in raw]
    comps.sort(key=lambda c: (c.weight, c.rep.length, c.rep.word or ()))
    return comps


def fixed_components(v: MarkedVariety, sigma: Cocharacter, L: Linearization | None = None, cache_dir=None) -> ActionReport:
    rs = build_root_system(v.diagram)
    if sigma.rank != rs.rank:
        raise ValueError(f"co-character has {sigma.rank} values, diagram {v.diagram} has {rs.rank} nodes")
    lam = weight_sum(rs, v.marked) if L is None else L.weight
    K = sigma.zeros
    J = frozenset(rs.diagram.nodes) - v.marked
    table = cached_coset_table(rs, J, cache_dir=cache_dir)
    roots = _tangent_roots(rs, v.marked)
    raw = []
    for orb in double_coset_orbits(table, K):
        raw.append(_component(rs, table.reps[orb.rep], len(orb), K, J, lam, sigma, roots))
    comps = _finish(raw, L)
    return ActionReport(v, sigma, tuple(comps), variety_dimension(v))


def isolated_endpoints(v: MarkedVariety, sigma: Cocharacter) -> tuple[bool, bool]:
    rep = fixed_components(v, sigma)
    return rep.isolated_sink, rep.isolated_source


# -- Picard-number-one scan ---------------------------------------------------

SCAN_EXCEPTIONAL = (("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2))


def scan_types(max_rank: int = 8) -> list[tuple[str, int]]:
    """Connected types up to isomorphism: A>=1, B>=2, C>=2, D>=4 and the exceptionals."""
    out = [("A", n) for n in range(1, max_rank + 1)]
    out += [("B", n) for n in range(2, max_rank + 1)]
    out += [("C", n) for n in range(2, max_rank + 1)]
    out += [("D", n) for n in range(4, max_rank + 1)]
    out += [t for t in SCAN_EXCEPTIONAL if t[1] <= max(max_rank, 8)]
    return out


def _redundant(letter: str, rank: int, i: int) -> bool:
    # diagram automorphisms: keep one node per orbit
    if letter == "D" and rank == 4:
        return i in (3, 4)
    if letter == "D":
        return i == rank - 1
    return False


@dataclass(frozen=True)
class IsolatedRow:
    family: str
    n: int
    literal: str
    dim: int
    delta: int


def _family(letter: str, rank: int, i: int) -> tuple[str, int]:
    if letter == "A" and rank % 2 == 1 and i == (rank + 1) // 2:
        return "A_{2n-1}(n)", (rank + 1) // 2
    if letter == "C" and i == rank:
        return "C_n(n)", rank
    if letter == "B" and i == 1:
        return "B_n(1)", rank
    if letter == "D" and i == 1:
        return "D_n(1)", rank
    if letter == "D" and i == rank:
        return "D_n(n)", rank
    if letter == "E" and rank == 7 and i == 7:
        return "E_7(7)", 7
    return f"{letter}_{rank}({i})", rank


def classify_isolated_both(max_rank: int = 8) -> list[IsolatedRow]:
    """Every D(i) with sigma_i short whose sink and source are both isolated points."""
    if max_rank < 8:
        raise ValueError("the scan needs a rank cap of at least 8 to reach the exceptional types")
    rows = []
    for letter, rank in scan_types(max_rank):
        d = DynkinDiagram(((letter, rank),))
        for i, _ in classify_short_gradings(d):
            if _redundant(letter, rank, i):
                continue
            v = MarkedVariety(d, frozenset({i}))
            rep = fixed_components(v, Cocharacter.basic(rank, i))
            if rep.isolated_sink and rep.isolated_source:
                fam, n = _family(letter, rank, i)
                rows.append(IsolatedRow(fam, n, v.literal, rep.dim, rep.bandwidth))
    order = ["A_{2n-1}(n)", "C_n(n)", "B_n(1)", "D_n(1)", "D_n(n)", "E_7(7)"]
    rows.sort(key=lambda r: (order.index(r.family) if r.family in order else len(order), r.n))
    return rows


# -- products -------------------------------------------------------------------


def _block_diag(rs: RootSystem, mats: Sequence[np.ndarray], words) -> WeylElement:
    n = rs.rank
    m = np.zeros((n, n), dtype=np.int64)
    off = 0
    full_word: tuple[int, ...] | None = ()
    for a, wd in zip(mats, words):
        k = a.shape[0]
        m[off : off + k, off : off + k] = a
        if full_word is not None and wd is not None:
            full_word += tuple(x + off for x in wd)
        else:
            full_word = None
        off += k
    return WeylElement(rs, m, full_word)


def product_report(reports: Sequence[ActionReport]) -> ActionReport:
    """Fixed data of the product action: componentwise products of fixed components."""
    if not reports:
        raise ValueError("no factors")
    if len(reports) == 1:
        return reports[0]
    comps = tuple(c for r in reports for c in r.variety.diagram.components)
    d = DynkinDiagram(comps)
    rs = build_root_system(d)
    marked, values, off = set(), [], 0
    for r in reports:
        marked |= {m + off for m in r.variety.marked}
        values.extend(r.sigma.values)
        off += r.variety.diagram.rank
    out = []
    for combo in iproduct(*(r.components for r in reports)):
        rep = _block_diag(rs, [c.rep.matrix for c in combo], [c.rep.word for c in combo])
        ctype = VarietyType.point()
        for c in combo:
            ctype = ctype * c.ctype
        offs = np.cumsum([0] + [r.variety.diagram.rank for r in reports])
        out.append(
            FixedComponent(
                rep=rep,
                ctype=ctype,
                weight=sum(c.weight for c in combo),
                dim=sum(c.dim for c in combo),
                nu_plus=sum(c.nu_plus for c in combo),
                nu_minus=sum(c.nu_minus for c in combo),
                hfixed=prod(c.hfixed for c in combo),
                marks=frozenset(m + int(o) for c, o in zip(combo, offs) for m in c.marks),
                tangent=tuple(sorted(t for c in combo for t in c.tangent)),
            )
        )
    out.sort(key=lambda c: (c.weight, c.rep.length, c.rep.word or ()))
    return ActionReport(
        MarkedVariety(d, frozenset(marked)), Cocharacter(tuple(values)), tuple(out), sum(r.dim for r in reports)
    )


def fundamental_locus(report: ActionReport) -> list[FixedComponent]:
    """Weight-1 components with more than one negative direction.

    These are the inner components met by the general orbit closures through
    the sink that the induced map fails to resolve.
    """
    base = min(report.weights)
    return [c for c in report.stratum(base + 1) if c.nu_minus > 1 and c not in report.source]


# -- the fibre action and the varieties X(J) -----------------------------------


@dataclass(frozen=True)
class SigmaPlus:
    diagram: DynkinDiagram  # D_i with standard labels
    relabel: dict[int, int] = field(compare=False)  # original -> D_i labels
    sigma: Cocharacter  # on D_i
    J: frozenset[int]  # original labels
    J_local: frozenset[int]  # D_i labels

    def __iter__(self):
        return iter((self.sigma, self.J))


def _require_short(diagram: DynkinDiagram, i: int) -> None:
    if len(diagram.components) != 1 or i not in dict(classify_short_gradings(diagram)):
        raise ValueError(f"({diagram.literal}, {i}) does not give a short grading")


def sigma_plus(diagram: DynkinDiagram, i: int) -> SigmaPlus:
    """Co-character induced on the fibre over r_i P_i, plus the J giving it an isolated source."""
    _require_short(diagram, i)
    rs = build_root_system(diagram)
    sub, relabel = subdiagram(diagram, {i})
    r_i = simple_reflection(rs, i)
    sigma_i = Cocharacter.basic(rs.rank, i)
    values = [0] * sub.rank
    for j, loc in relabel.items():
        e = tuple(int(k == j - 1) for k in range(rs.rank))
        values[loc - 1] = sigma_i(r_i.act(e))
    sp = Cocharacter(tuple(values))
    back = {loc: j for j, loc in relabel.items()}
    J_local = set()
    for idx, (letter, rank) in enumerate(sub.components):
        comp = DynkinDiagram(((letter, rank),))
        off = sub.offsets[idx]
        sig = Cocharacter(sp.values[off : off + rank])
        hits = [
            k
            for k in comp.nodes
            if fixed_components(MarkedVariety(comp, frozenset({k})), sig).isolated_source
        ]
        if not hits:
            raise ValueError(f"no isolated source on component {letter}{rank} of {sub}")
        J_local.add(off + hits[0])
    return SigmaPlus(sub, relabel, sp, frozenset(back[k] for k in J_local), frozenset(J_local))


def xbar_report(diagram: DynkinDiagram, i: int, cache_dir=None) -> ActionReport:
    """Fixed components of the C*-action on X(J) = D(J+i) x_{D(i)} l, with L = L_i + sum L_j."""
    sp = sigma_plus(diagram, i)
    rs = build_root_system(diagram)
    n = rs.rank
    K = frozenset(diagram.nodes) - {i}
    J = sp.J
    stab = K - J
    sigma = Cocharacter.basic(n, i)
    lam = weight_sum(rs, J | {i})
    fibre_roots = _tangent_roots(rs, J)
    fibre_roots = fibre_roots[fibre_roots[:, i - 1] == 0]
    table = min_coset_reps(rs, stab, within=K)
    raw = []
    # F_-: fixed pointwise, plus the direction of l leaving the sink
    e = table.reps[0]
    y0 = _component(rs, e, len(table), K, stab, lam, sigma, fibre_roots, extra=(-1,))
    raw.append(y0)
    # F_+ = r_i * (fibre); components are orbits of the zero set of sigma_plus
    K_plus = K - frozenset(diagram.neighbors(i))
    r_i = simple_reflection(rs, i)
    for orb in double_coset_orbits(table, K_plus):
        w = table.reps[orb.rep]
        point = r_i * w
        rw, kw = _component(rs, point, len(orb), K, stab, lam, sigma, fibre_roots, extra=(1,))
        # the type is read in the fibre: Kilmoyer marks of w on the zero set of sigma_plus
        kw["ctype"], kw["marks"] = _fibre_type(rs, w, K_plus, stab)
        raw.append((rw, kw))
    comps = _finish(raw, None)
    v = MarkedVariety(diagram, J | {i})
    return ActionReport(v, sigma, tuple(comps), len(fibre_roots) + 1, label=f"Xbar({','.join(map(str, sorted(J)))})")


def _fibre_type(rs: RootSystem, w: WeylElement, K_plus, stab) -> tuple[VarietyType, frozenset[int]]:
    winv = w.inverse()
    marks = frozenset(
        k for k in K_plus if not _in_parabolic(winv.act(tuple(int(x == k - 1) for x in range(rs.rank))), stab)
    )
    return marked_type(rs.diagram, K_plus, marks), marks


@dataclass(frozen=True)
class ExcLoci:
    domain: VarietyType  # D_i(J)
    dim: int
    source_weight: int
    exc_psi: tuple[VarietyType, ...]  # Y_1, a disjoint union
    exc_psi_inv: tuple[VarietyType, ...]  # Y_2; empty when psi is an isomorphism
    is_isomorphism: bool
    nu_plus_y1: tuple[int, ...]
    nu_minus_y2: tuple[int, ...]

    def __iter__(self):
        return iter((self.exc_psi, self.exc_psi_inv, self.is_isomorphism))


def exc_loci(diagram: DynkinDiagram, i: int, report: ActionReport | None = None) -> ExcLoci:
    rep = report or xbar_report(diagram, i)
    y0 = rep.stratum(0)
    # Y_1, Y_2 are the inner components; the source is kept apart even when it sits at weight 2
    source = rep.source
    y1 = [c for c in rep.stratum(1) if c not in source]
    y2 = [c for c in rep.stratum(2) if c not in source]
    return ExcLoci(
        domain=y0[0].ctype,
        dim=y0[0].dim,
        source_weight=max(rep.weights),
        exc_psi=tuple(c.ctype for c in y1),
        exc_psi_inv=tuple(c.ctype for c in y2),
        is_isomorphism=not y2,
        nu_plus_y1=tuple(c.nu_plus for c in y1),
        nu_minus_y2=tuple(c.nu_minus for c in y2),
    )
