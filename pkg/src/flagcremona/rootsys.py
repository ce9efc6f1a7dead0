"""Dynkin diagrams, root systems, fundamental weights and marked diagrams.

Everything is expressed in the basis of simple roots: roots are integer
vectors, weights are vectors of ``Fraction``.  Node labels are global and
1-based; a disjoint union ``A3+A1`` numbers the second component 4.

Bourbaki numbering is used inside each component.  The Cartan matrix
convention is ``C[i][j] = 2 (a_i, a_j) / (a_j, a_j)`` so that the simple
reflection is ``r_i(a_j) = a_j - C[j][i] a_i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations
from math import factorial, prod

import numpy as np

from . import exact

Root = tuple[int, ...]
Weight = tuple[Fraction, ...]

LETTERS = "ABCDEFG"
MAX_CLASSICAL_RANK = 12

#: |W| for exceptional types
_EXCEPTIONAL_ORDERS = {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}

#: number of positive roots for exceptional types
_EXCEPTIONAL_POSITIVE = {("E", 6): 36, ("E", 7): 63, ("E", 8): 120, ("F", 4): 24, ("G", 2): 6}


class ParseError(ValueError):
    """Malformed diagram or variety literal; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}\n{' ' * (pos + 1)}^")


def admissible(letter: str, rank: int) -> bool:
    if letter == "A":
        return rank >= 1
    if letter in "BC":
        return rank >= 2
    if letter == "D":
        return rank >= 3
    if letter == "E":
        return rank in (6, 7, 8)
    if letter == "F":
        return rank == 4
    if letter == "G":
        return rank == 2
    return False


def positive_root_count(letter: str, rank: int) -> int:
    """Closed-form |Phi+| for a simple type."""
    n = rank
    if letter == "A":
        return n * (n + 1) // 2
    if letter in "BC":
        return n * n
    if letter == "D":
        return n * (n - 1)
    return _EXCEPTIONAL_POSITIVE[(letter, n)]


def weyl_group_order(letter: str, rank: int) -> int:
    n = rank
    if letter == "A":
        return factorial(n + 1)
    if letter in "BC":
        return 2**n * factorial(n)
    if letter == "D":
        return 2 ** (n - 1) * factorial(n)
    return _EXCEPTIONAL_ORDERS[(letter, n)]


def _bourbaki_edges(letter: str, n: int) -> list[tuple[int, int, int, int]]:
    """Edges (i, j, C_ij, C_ji) with 1-based local labels."""
    chain = [(k, k + 1, -1, -1) for k in range(1, n)]
    if letter == "A":
        return chain
    if letter == "B":
        # a_n short
        return chain[:-1] + [(n - 1, n, -2, -1)]
    if letter == "C":
        # a_n long
        return chain[:-1] + [(n - 1, n, -1, -2)]
    if letter == "D":
        return [(k, k + 1, -1, -1) for k in range(1, n - 1)] + [(n - 2, n, -1, -1)]
    if letter == "E":
        return [(1, 3, -1, -1), (2, 4, -1, -1)] + [(k, k + 1, -1, -1) for k in range(3, n)]
    if letter == "F":
        return [(1, 2, -1, -1), (2, 3, -2, -1), (3, 4, -1, -1)]
    if letter == "G":
        # a_1 short, a_2 long
        return [(1, 2, -1, -3)]
    raise ValueError(f"unknown type letter {letter!r}")


@lru_cache(maxsize=None)
def standard_cartan(letter: str, rank: int) -> tuple[tuple[int, ...], ...]:
    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j, cij, cji in _bourbaki_edges(letter, rank):
        c[i - 1][j - 1] = cij
        c[j - 1][i - 1] = cji
    return tuple(tuple(row) for row in c)


@dataclass(frozen=True)
class DynkinDiagram:
    """A disjoint union of connected Dynkin diagrams with global node labels."""

    components: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for idx, (letter, rank) in enumerate(self.components):
            if not admissible(letter, rank):
                raise ValueError(f"inadmissible component #{idx + 1}: {letter}{rank}")

    @classmethod
    def of(cls, *parts: str | tuple[str, int]) -> DynkinDiagram:
        comps = []
        for p in parts:
            comps.extend(parse_diagram(p).components if isinstance(p, str) else [p])
        return cls(tuple(comps))

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.components)

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for _, r in self.components:
            out.append(acc)
            acc += r
        return tuple(out)

    def component_of(self, node: int) -> int:
        for idx, off in enumerate(self.offsets):
            if off < node <= off + self.components[idx][1]:
                return idx
        raise KeyError(f"node {node} not in {self.literal}")

    def local(self, node: int) -> int:
        return node - self.offsets[self.component_of(node)]

    def node(self, component: int, local: int) -> int:
        return self.offsets[component] + local

    @cached_property
    def cartan(self) -> np.ndarray:
        n = self.rank
        c = np.zeros((n, n), dtype=np.int64)
        for (letter, r), off in zip(self.components, self.offsets):
            c[off : off + r, off : off + r] = standard_cartan(letter, r)
        c.flags.writeable = False
        return c

    @cached_property
    def edges(self) -> tuple[tuple[int, int, int, str], ...]:
        """(i, j, multiplicity, arrow) with i < j; arrow points to the shorter root."""
        out = []
        c = self.cartan
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if c[i, j]:
                    mult = int(c[i, j] * c[j, i])
                    arrow = "" if mult == 1 else (">" if abs(c[i, j]) > abs(c[j, i]) else "<")
                    out.append((i + 1, j + 1, mult, arrow))
        return tuple(out)

    def neighbors(self, node: int) -> tuple[int, ...]:
        return tuple(j + 1 for j in range(self.rank) if j != node - 1 and self.cartan[node - 1, j])

    @property
    def literal(self) -> str:
        return "+".join(f"{l}{r}" for l, r in self.components) or "0"

    def __str__(self) -> str:
        return self.literal


@dataclass(frozen=True)
class MarkedVariety:
    """The rational homogeneous variety D(I) = G/P."""

    diagram: DynkinDiagram
    marked: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(self.marked))
        if not self.marked:
            raise ValueError("a marked variety needs at least one marked node")
        bad = self.marked - set(self.diagram.nodes)
        if bad:
            raise ValueError(f"marked nodes {sorted(bad)} not in {self.diagram}")

    @property
    def literal(self) -> str:
        parts = []
        for idx, (letter, r) in enumerate(self.diagram.components):
            loc = sorted(self.diagram.local(m) for m in self.marked if self.diagram.component_of(m) == idx)
            parts.append(f"{letter}{r}({','.join(map(str, loc))})")
        return "+".join(parts)

    def __str__(self) -> str:
        return self.literal


# -- literal parsing -------------------------------------------------------

_TOKEN = re.compile(r"([A-G])(\d+)(?:\(([\d,\s]*)\))?")


def _parse(text: str, want_marks: bool):
    comps, marks = [], []
    pos = 0
    s = text.strip()
    if not s:
        raise ParseError("empty literal", text, 0)
    while True:
        m = _TOKEN.match(s, pos)
        if not m:
            raise ParseError("expected a component like 'E7' or 'D6(6)'", s, pos)
        letter, rank = m.group(1), int(m.group(2))
        if not admissible(letter, rank):
            raise ParseError(f"inadmissible type {letter}{rank}", s, m.start(2))
        if m.group(3) is not None:
            if not want_marks:
                raise ParseError("unexpected marking in a diagram literal", s, m.start(3) - 1)
            local = []
            for tok in m.group(3).split(","):
                tok = tok.strip()
                if not tok:
                    continue
                k = int(tok)
                if not 1 <= k <= rank:
                    raise ParseError(f"marked node {k} outside 1..{rank}", s, m.start(3))
                local.append(k)
            marks.append(local)
        else:
            marks.append([])
        comps.append((letter, rank))
        pos = m.end()
        if pos == len(s):
            break
        if s[pos] == "(":
            raise ParseError("unclosed or malformed marking", s, pos)
        if s[pos] != "+":
            raise ParseError("expected '+' between components", s, pos)
        pos += 1
    return comps, marks


def parse_diagram(text: str) -> DynkinDiagram:
    comps, _ = _parse(text, want_marks=False)
    return DynkinDiagram(tuple(comps))


def parse_variety(text: str) -> MarkedVariety:
    """Parse ``D6(6)`` or ``A1(1)+B3(1)`` (marks are local to each component)."""
    comps, marks = _parse(text, want_marks=True)
    d = DynkinDiagram(tuple(comps))
    glob = {d.node(idx, k) for idx, loc in enumerate(marks) for k in loc}
    if not glob:
        raise ParseError("no marked nodes", text, len(text))
    return MarkedVariety(d, frozenset(glob))


# -- root systems ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RootSystem:
    diagram: DynkinDiagram
    cartan: np.ndarray
    symmetrizer: tuple[int, ...]
    norms: tuple[int, ...]  # (a_i, a_i), shortest root of each component has 2
    positives: tuple[Root, ...]

    @property
    def rank(self) -> int:
        return self.diagram.rank

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        return self.positives + tuple(tuple(-x for x in r) for r in self.positives)

    @cached_property
    def positive_array(self) -> np.ndarray:
        a = np.array(self.positives, dtype=np.int64).reshape(len(self.positives), self.rank)
        a.flags.writeable = False
        return a

    @cached_property
    def root_set(self) -> frozenset[Root]:
        return frozenset(self.roots)

    def pairing(self, a, b) -> Fraction:
        """Symmetrized invariant form on simple-root coordinates."""
        total = Fraction(0)
        c = self.cartan
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y and c[i, j]:
                    total += Fraction(x) * y * int(c[i, j]) * self.norms[j] / 2
        return total

    def coroot_pairing(self, beta, i: int) -> Fraction:
        """<beta, a_i^vee> for a node i (1-based)."""
        col = self.cartan[:, i - 1]
        return sum((Fraction(x) * int(col[j]) for j, x in enumerate(beta) if x), Fraction(0))

    def highest_roots(self) -> list[Root]:
        """One highest root per connected component."""
        out = []
        for (letter, r), off in zip(self.diagram.components, self.diagram.offsets):
            comp = [p for p in self.positives if any(p[off : off + r])]
            out.append(max(comp, key=lambda p: (sum(p), p)))
        return out

    def __repr__(self) -> str:
        return f"RootSystem({self.diagram.literal}, |Phi+|={len(self.positives)})"


def _norms(cartan: np.ndarray, diagram: DynkinDiagram) -> tuple[int, ...]:
    # C_ij |a_j|^2 = C_ji |a_i|^2 on every edge; propagate along each component
    n = diagram.rank
    norm: list[Fraction | None] = [None] * n
    for (_, r), off in zip(diagram.components, diagram.offsets):
        norm[off] = Fraction(1)
        stack = [off]
        while stack:
            i = stack.pop()
            for j in range(off, off + r):
                if j != i and cartan[i, j] and norm[j] is None:
                    norm[j] = norm[i] * int(cartan[j, i]) / int(cartan[i, j])
                    stack.append(j)
        low = min(norm[off : off + r])
        for j in range(off, off + r):
            norm[j] = 2 * norm[j] / low
    return tuple(int(x) for x in norm)


def _positive_roots(cartan: np.ndarray) -> list[Root]:
    """Root-string closure: b + a_i is a root iff q > 0 where q = p - <b, a_i^vee>."""
    n = cartan.shape[0]
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    known = set(simple)
    layer = list(simple)
    out = list(simple)
    while layer:
        nxt = []
        for b in layer:
            for i in range(n):
                p = 0
                down = list(b)
                while True:
                    down[i] -= 1
                    if tuple(down) in known:
                        p += 1
                    else:
                        break
                pair = sum(b[j] * int(cartan[j, i]) for j in range(n))
                if p - pair > 0:
                    up = list(b)
                    up[i] += 1
                    t = tuple(up)
                    if t not in known:
                        known.add(t)
                        nxt.append(t)
        out.extend(nxt)
        layer = nxt
    return out


def build_root_system(diagram: DynkinDiagram, max_rank: int = MAX_CLASSICAL_RANK) -> RootSystem:
    for idx, (letter, r) in enumerate(diagram.components):
        if not admissible(letter, r):
            raise ValueError(f"inadmissible component #{idx + 1}: {letter}{r}")
        if letter in "ABCD" and r > max_rank:
            raise ValueError(f"component #{idx + 1} {letter}{r} exceeds the rank cap {max_rank}")
    return _build(diagram)


@lru_cache(maxsize=None)
def _build(diagram: DynkinDiagram) -> RootSystem:
    cartan = diagram.cartan
    norms = _norms(cartan, diagram)
    top = max(norms) if norms else 1
    symm = tuple(top // x for x in norms)
    pos = sorted(_positive_roots(cartan), key=lambda r: (sum(r), r))
    return RootSystem(diagram, cartan, symm, norms, tuple(pos))


def fundamental_weights(rs: RootSystem) -> list[Weight]:
    """lambda_j in simple-root coordinates: row j of the inverse Cartan matrix."""
    inv = exact.inverse(exact.to_matrix(rs.cartan.tolist()))
    return [tuple(row) for row in inv]


def weight_sum(rs: RootSystem, nodes) -> Weight:
    lam = fundamental_weights(rs)
    out = [Fraction(0)] * rs.rank
    for j in nodes:
        out = [x + y for x, y in zip(out, lam[j - 1])]
    return tuple(out)


def variety_dimension(v: MarkedVariety) -> int:
    rs = build_root_system(v.diagram)
    idx = [m - 1 for m in v.marked]
    return int(np.count_nonzero(rs.positive_array[:, idx].sum(axis=1)))


# -- identification of subdiagrams ----------------------------------------


@dataclass(frozen=True)
class Component:
    """A connected piece of a subdiagram, identified with a standard type.

    ``labels[k-1]`` is the original node playing the role of standard node k.
    """

    letter: str
    rank: int
    labels: tuple[int, ...]

    @property
    def relabel(self) -> dict[int, int]:
        return {old: k + 1 for k, old in enumerate(self.labels)}


def _candidates(rank: int) -> list[str]:
    out = ["A"]
    if rank >= 2:
        out.append("B")
    if rank >= 3:
        out.append("C")
    if rank >= 4:
        out.append("D")
    if rank in (6, 7, 8):
        out.append("E")
    if rank == 4:
        out.append("F")
    if rank == 2:
        out.append("G")
    return out


def _isomorphism(std, sub, labels) -> tuple[int, ...] | None:
    """Lexicographically smallest phi with sub[phi a][phi b] == std[a][b]."""
    r = len(labels)
    phi: list[int] = []
    used = [False] * r

    def extend() -> bool:
        a = len(phi)
        if a == r:
            return True
        for x in range(r):
            if used[x] or sub[x][x] != std[a][a]:
                continue
            if all(sub[phi[b]][x] == std[b][a] and sub[x][phi[b]] == std[a][b] for b in range(a)):
                phi.append(x)
                used[x] = True
                if extend():
                    return True
                phi.pop()
                used[x] = False
        return False

    if not extend():
        return None
    return tuple(labels[x] for x in phi)


def _connected_pieces(diagram: DynkinDiagram, nodes) -> list[list[int]]:
    nodes = sorted(set(nodes))
    left = set(nodes)
    pieces = []
    c = diagram.cartan
    for start in nodes:
        if start not in left:
            continue
        piece, stack = [], [start]
        left.discard(start)
        while stack:
            i = stack.pop()
            piece.append(i)
            for j in list(left):
                if c[i - 1, j - 1]:
                    left.discard(j)
                    stack.append(j)
        pieces.append(sorted(piece))
    return pieces


@lru_cache(maxsize=None)
def identify(diagram: DynkinDiagram, nodes: frozenset[int]) -> tuple[Component, ...]:
    """Identify the induced subdiagram on ``nodes`` as standard components.

    Components are ordered by their smallest original label.  Ties between
    isomorphisms are broken by the lexicographically smallest label tuple,
    and between types in the order A, B, C, D, E, F, G (so a double bond of
    rank 2 is B2, and D3 comes out as A3).
    """
    out = []
    c = diagram.cartan
    for piece in _connected_pieces(diagram, nodes):
        sub = [[int(c[i - 1, j - 1]) for j in piece] for i in piece]
        r = len(piece)
        for letter in _candidates(r):
            phi = _isomorphism(standard_cartan(letter, r), sub, piece)
            if phi is not None:
                out.append(Component(letter, r, phi))
                break
        else:  # pragma: no cover - every connected Cartan submatrix is of finite type
            raise ValueError(f"could not identify the subdiagram on {piece}")
    return tuple(out)


def subdiagram(diagram: DynkinDiagram, removed) -> tuple[DynkinDiagram, dict[int, int]]:
    """Delete ``removed`` and return the standard diagram plus the old-to-new node map."""
    keep = frozenset(diagram.nodes) - frozenset(removed)
    comps = identify(diagram, keep)
    new = DynkinDiagram(tuple((k.letter, k.rank) for k in comps))
    relabel = {}
    for idx, k in enumerate(comps):
        for old, loc in k.relabel.items():
            relabel[old] = new.node(idx, loc)
    return new, relabel


# -- marked types of fixed components --------------------------------------

def _automorphisms(letter: str, rank: int) -> list[tuple[int, ...]]:
    """Diagram automorphisms as permutations of local labels, identity first."""
    ident = tuple(range(1, rank + 1))
    if letter == "A" and rank > 1:
        return [ident, tuple(range(rank, 0, -1))]
    if letter == "D" and rank == 4:
        out = []
        for p in permutations((1, 3, 4)):
            m = {1: p[0], 3: p[1], 4: p[2], 2: 2}
            out.append(tuple(m[k] for k in ident))
        return out
    if letter == "D":
        return [ident, ident[:-2] + (rank, rank - 1)]
    if letter == "E" and rank == 6:
        return [ident, (6, 2, 5, 4, 3, 1)]
    return [ident]


@dataclass(frozen=True, order=True)
class Factor:
    letter: str
    rank: int
    marks: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.letter}{self.rank}({','.join(map(str, self.marks))})"

    @property
    def dimension(self) -> int:
        d = DynkinDiagram(((self.letter, self.rank),))
        return variety_dimension(MarkedVariety(d, frozenset(self.marks)))

    def up_to_automorphism(self) -> Factor:
        best = min(tuple(sorted(p[m - 1] for m in self.marks)) for p in _automorphisms(self.letter, self.rank))
        return Factor(self.letter, self.rank, best)


@dataclass(frozen=True)
class VarietyType:
    """Isomorphism-type label of a homogeneous variety, as a product of marked diagrams.

    Unmarked factors are points and are dropped, so a point is the empty
    product.  Factors are kept sorted.
    """

    factors: tuple[Factor, ...] = ()

    @classmethod
    def point(cls) -> VarietyType:
        return cls(())

    @classmethod
    def make(cls, factors) -> VarietyType:
        return cls(tuple(sorted(f for f in factors if f.marks)))

    @property
    def is_point(self) -> bool:
        return not self.factors

    @property
    def dimension(self) -> int:
        return sum(f.dimension for f in self.factors)

    def __mul__(self, other: VarietyType) -> VarietyType:
        return VarietyType.make(self.factors + other.factors)

    def up_to_automorphism(self) -> VarietyType:
        return VarietyType.make(f.up_to_automorphism() for f in self.factors)

    def __str__(self) -> str:
        # same syntax as a variety literal, so a non-point type parses back
        return "+".join(map(str, self.factors)) if self.factors else "pt"


def marked_type(diagram: DynkinDiagram, nodes, marks) -> VarietyType:
    """Type of the homogeneous variety of the subdiagram on ``nodes`` marked at ``marks``."""
    marks = set(marks)
    factors = []
    for comp in identify(diagram, frozenset(nodes)):
        loc = tuple(sorted(comp.relabel[m] for m in marks if m in comp.relabel))
        factors.append(Factor(comp.letter, comp.rank, loc))
    return VarietyType.make(factors)


def variety_type(v: MarkedVariety) -> VarietyType:
    return marked_type(v.diagram, v.diagram.nodes, v.marked)
