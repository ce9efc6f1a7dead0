"""Co-characters and the Z-gradings they induce on the Lie algebra."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .rootsys import DynkinDiagram, MarkedVariety, RootSystem, build_root_system, subdiagram


@dataclass(frozen=True)
class Cocharacter:
    """Integer values on the simple roots, extended linearly."""

    values: tuple[int, ...]

    @classmethod
    def basic(cls, rank: int, *nodes: int) -> Cocharacter:
        """sigma_{i1} + sigma_{i2} + ...; repeated nodes add up."""
        vals = [0] * rank
        for i in nodes:
            if not 1 <= i <= rank:
                raise ValueError(f"node {i} outside 1..{rank}")
            vals[i - 1] += 1
        return cls(tuple(vals))

    @classmethod
    def zero(cls, rank: int) -> Cocharacter:
        return cls((0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.values)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(k + 1 for k, v in enumerate(self.values) if v)

    @property
    def zeros(self) -> frozenset[int]:
        return frozenset(k + 1 for k, v in enumerate(self.values) if not v)

    def __call__(self, vec):
        if len(vec) != len(self.values):
            raise ValueError(f"vector of length {len(vec)} for a rank {self.rank} co-character")
        return sum((v * x for v, x in zip(self.values, vec) if v and x), 0)

    def __add__(self, other: Cocharacter) -> Cocharacter:
        if other.rank != self.rank:
            raise ValueError("co-characters on different lattices")
        return Cocharacter(tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> Cocharacter:
        return Cocharacter(tuple(-a for a in self.values))

    def __str__(self) -> str:
        terms = []
        for k, v in enumerate(self.values):
            if v:
                terms.append((f"{v}*" if v != 1 else "") + f"s{k + 1}")
        return "+".join(terms) or "0"


@dataclass(frozen=True)
class GradingReport:
    pieces: Mapping[int, int]
    short: bool
    transversal: DynkinDiagram


def grade(rs: RootSystem, sigma: Cocharacter) -> GradingReport:
    counts = Counter()
    for a in rs.positives:
        m = sigma(a)
        counts[m] += 1
        counts[-m] += 1
    counts[0] += rs.rank
    pieces = {m: counts[m] for m in sorted(counts) if counts[m]}
    transversal, _ = subdiagram(rs.diagram, sigma.support)
    return GradingReport(pieces, _is_short(pieces), transversal)


def _is_short(pieces: Mapping[int, int]) -> bool:
    return set(pieces) <= {-1, 0, 1} and pieces.get(1, 0) > 0


def is_short(report: GradingReport) -> bool:
    return _is_short(report.pieces)


def classify_short_gradings(diagram: DynkinDiagram) -> list[tuple[int, DynkinDiagram]]:
    """Nodes i with sigma_i short, paired with the diagram left after deleting i."""
    if len(diagram.components) != 1:
        raise ValueError(f"{diagram.literal} is not connected; classify each component separately")
    rs = build_root_system(diagram)
    out = []
    for i in diagram.nodes:
        rep = grade(rs, Cocharacter.basic(rs.rank, i))
        if is_short(rep):
            out.append((i, rep.transversal))
    return out


def equalized(v: MarkedVariety, sigma: Cocharacter) -> bool:
    """Every root evaluates into {-1, 0, 1}."""
    rs = build_root_system(v.diagram)
    return all(abs(sigma(a)) <= 1 for a in rs.positives)
