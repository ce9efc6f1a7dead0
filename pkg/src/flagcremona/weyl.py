"""Weyl group elements as lattice matrices, parabolic cosets and double cosets.

A Weyl element is stored as the integer matrix of its action on
simple-root coordinates: column ``j`` is ``w(a_j)``.  Nothing here ever
lists a whole Weyl group; cosets W/W(J) are enumerated as the orbit of a
dominant weight whose stabilizer is exactly W(J).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import prod
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .rootsys import RootSystem, identify, weyl_group_order

CACHE_VERSION = 1
DEFAULT_CAP = 250_000


class CosetCapExceeded(ValueError):
    def __init__(self, projected: int, cap: int):
        self.projected = projected
        self.cap = cap
        super().__init__(f"projected coset count {projected} exceeds the cap {cap}")


@dataclass(frozen=True, eq=False)
class WeylElement:
    rs: RootSystem = field(repr=False)
    matrix: np.ndarray
    word: tuple[int, ...] | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, rs: RootSystem) -> WeylElement:
        return cls(rs, np.eye(rs.rank, dtype=np.int64), ())

    @classmethod
    def from_word(cls, rs: RootSystem, word: Sequence[int]) -> WeylElement:
        m = np.eye(rs.rank, dtype=np.int64)
        for i in word:
            m = m @ _reflection_matrix(rs, i)
        return cls(rs, m, tuple(word))

    @cached_property
    def length(self) -> int:
        img = self.rs.positive_array @ self.matrix.T
        return int(np.count_nonzero((img < 0).any(axis=1)))

    def __mul__(self, other: WeylElement) -> WeylElement:
        word = None
        if self.word is not None and other.word is not None:
            word = self.word + other.word
        return WeylElement(self.rs, self.matrix @ other.matrix, word)

    def inverse(self) -> WeylElement:
        # W preserves an integral lattice and has finite order, so the inverse is integral
        inv = np.rint(np.linalg.inv(self.matrix)).astype(np.int64)
        word = tuple(reversed(self.word)) if self.word is not None else None
        return WeylElement(self.rs, inv, word)

    def act(self, vec) -> tuple:
        """Apply to a root (ints) or weight (Fractions) in simple-root coordinates."""
        m = self.matrix
        n = m.shape[0]
        return tuple(sum((int(m[r, c]) * vec[c] for c in range(n) if vec[c]), 0 * vec[0]) for r in range(n))

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())

    def __repr__(self) -> str:
        w = "".join(f"s{i}" for i in self.word) if self.word else ("e" if self.word == () else "?")
        return f"WeylElement({w}, length={self.length})"


@lru_cache(maxsize=None)
def _reflection_cached(rs: RootSystem, i: int) -> np.ndarray:
    n = rs.rank
    s = np.eye(n, dtype=np.int64)
    # column j is r_i(a_j) = a_j - C_ji a_i, i.e. row i gets -C[j][i]
    s[i - 1, :] -= rs.cartan[:, i - 1]
    s.flags.writeable = False
    return s


def _reflection_matrix(rs: RootSystem, i: int) -> np.ndarray:
    if not 1 <= i <= rs.rank:
        raise ValueError(f"unknown node {i} (diagram {rs.diagram.literal} has nodes 1..{rs.rank})")
    return _reflection_cached(rs, i)


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    return WeylElement(rs, _reflection_matrix(rs, i), (i,))


def longest_element(rs: RootSystem) -> WeylElement:
    """Greedy: right-multiply by s_i while some w(a_i) is still positive."""
    m = np.eye(rs.rank, dtype=np.int64)
    word: list[int] = []
    while True:
        col_pos = [i for i in range(rs.rank) if (m[:, i] > 0).any()]
        if not col_pos:
            break
        i = col_pos[0] + 1
        m = m @ _reflection_matrix(rs, i)
        word.append(i)
    w = WeylElement(rs, m, tuple(word))
    assert w.length == len(rs.positives) == len(word)
    return w


def group_order(rs: RootSystem, nodes: Iterable[int] | None = None) -> int:
    """|W(nodes)| for the parabolic subgroup on ``nodes`` (all nodes by default)."""
    nodes = frozenset(rs.diagram.nodes if nodes is None else nodes)
    return prod(weyl_group_order(c.letter, c.rank) for c in identify(rs.diagram, nodes))


# -- cosets ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CosetTable:
    """Minimal representatives of W(K)/W(K n J), K the generating set (all nodes by default).

    ``edges[r][i-1]`` is the index of the coset s_i * reps[r], or None if
    node i is not a generator.
    """

    rs: RootSystem = field(repr=False)
    parabolic: frozenset[int]
    generators: frozenset[int]
    reps: tuple[WeylElement, ...]
    edges: tuple[tuple[int | None, ...], ...]

    def __len__(self) -> int:
        return len(self.reps)

    def index(self) -> dict[WeylElement, int]:
        return {w: k for k, w in enumerate(self.reps)}

    def to_json(self) -> dict:
        return {
            "version": CACHE_VERSION,
            "diagram": self.rs.diagram.literal,
            "parabolic": sorted(self.parabolic),
            "generators": sorted(self.generators),
            "words": [list(w.word) for w in self.reps],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, rs: RootSystem, data: dict) -> CosetTable:
        if data.get("version") != CACHE_VERSION:
            raise ValueError(f"coset cache format {data.get('version')} != {CACHE_VERSION}")
        if data["diagram"] != rs.diagram.literal:
            raise ValueError(f"cache is for {data['diagram']}, not {rs.diagram.literal}")
        reps = tuple(WeylElement.from_word(rs, w) for w in data["words"])
        return cls(
            rs,
            frozenset(data["parabolic"]),
            frozenset(data["generators"]),
            reps,
            tuple(tuple(e) for e in data["edges"]),
        )


def projected_coset_count(rs: RootSystem, J, within=None) -> int:
    K = frozenset(rs.diagram.nodes if within is None else within)
    return group_order(rs, K) // group_order(rs, K & frozenset(J))


def min_coset_reps(rs: RootSystem, J, within=None, cap: int = DEFAULT_CAP) -> CosetTable:
    """Enumerate W(K)/W(K n J) breadth first, K = ``within`` or all nodes.

    A coset is tracked through the Dynkin labels of w(mu), mu the sum of
    fundamental weights off J.  Each rep keeps its lexicographically smallest
    reduced word; reps are ordered by (length, word).
    """
    J = frozenset(J)
    K = frozenset(rs.diagram.nodes if within is None else within)
    for node in J | K:
        if not 1 <= node <= rs.rank:
            raise ValueError(f"unknown node {node} for {rs.diagram.literal}")
    projected = projected_coset_count(rs, J, K)
    if projected > cap:
        raise CosetCapExceeded(projected, cap)
    return _enumerate(rs, J, K)


@lru_cache(maxsize=256)
def _enumerate(rs: RootSystem, J: frozenset[int], K: frozenset[int]) -> CosetTable:
    n = rs.rank
    c = rs.cartan
    gens = sorted(K)
    start = tuple(0 if k + 1 in J else 1 for k in range(n))
    words: dict[tuple, tuple[int, ...]] = {start: ()}
    mats: dict[tuple, np.ndarray] = {start: np.eye(n, dtype=np.int64)}
    order = [start]
    level = [start]
    while level:
        cand: dict[tuple, tuple[int, ...]] = {}
        src: dict[tuple, tuple[tuple, int]] = {}
        for m in level:
            for i in gens:
                if m[i - 1] > 0:
                    t = tuple(int(x) for x in np.asarray(m) - m[i - 1] * c[i - 1, :])
                    if t in words:
                        continue
                    wd = (i,) + words[m]
                    if t not in cand or wd < cand[t]:
                        cand[t] = wd
                        src[t] = (m, i)
        nxt = sorted(cand, key=lambda t: cand[t])
        for t in nxt:
            words[t] = cand[t]
            m, i = src[t]
            mats[t] = _reflection_matrix(rs, i) @ mats[m]
        order.extend(nxt)
        level = nxt
    index = {m: k for k, m in enumerate(order)}
    edges = []
    for m in order:
        row: list[int | None] = [None] * n
        for i in gens:
            t = tuple(int(x) for x in np.asarray(m) - m[i - 1] * c[i - 1, :])
            row[i - 1] = index[t]
        edges.append(tuple(row))
    reps = tuple(WeylElement(rs, mats[m], words[m]) for m in order)
    return CosetTable(rs, J, K, reps, tuple(edges))


def cache_dir_default() -> Path | None:
    env = os.environ.get("FLAGCREMONA_CACHE")
    return Path(env) if env else None


def cached_coset_table(rs: RootSystem, J, within=None, cache_dir=None, cap: int = DEFAULT_CAP) -> CosetTable:
    """min_coset_reps with an on-disk JSON cache keyed by (diagram, J, K) and format version."""
    cache_dir = Path(cache_dir) if cache_dir else cache_dir_default()
    if cache_dir is None:
        return min_coset_reps(rs, J, within, cap)
    J = frozenset(J)
    K = frozenset(rs.diagram.nodes if within is None else within)
    key = f"v{CACHE_VERSION}_{rs.diagram.literal}_J{'-'.join(map(str, sorted(J))) or 'none'}_K{'-'.join(map(str, sorted(K))) or 'none'}.json"
    path = cache_dir / key
    if path.exists():
        try:
            return CosetTable.from_json(rs, json.loads(path.read_text()))
        except (ValueError, KeyError, json.JSONDecodeError):
            pass  # stale or corrupt; rebuild below
    table = min_coset_reps(rs, J, K, cap)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(table.to_json()))
    return table


# -- double cosets ------------------------------------------------------------


@dataclass(frozen=True)
class Orbit:
    members: tuple[int, ...]
    rep: int  # index of the minimal representative in the table

    def __len__(self) -> int:
        return len(self.members)


def double_coset_orbits(table: CosetTable, K) -> list[Orbit]:
    """Orbits of W(K) acting on the left of the cosets, by union-find over s_k edges."""
    K = sorted(frozenset(K))
    missing = set(K) - table.generators
    if missing:
        raise ValueError(f"coset table has no edges for nodes {sorted(missing)}")
    parent = list(range(len(table)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r, row in enumerate(table.edges):
        for k in K:
            a, b = find(r), find(row[k - 1])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for r in range(len(table)):
        groups.setdefault(find(r), []).append(r)
    # reps are sorted by (length, word), so the smallest index is the minimal rep
    out = [Orbit(tuple(members), min(members)) for members in groups.values()]
    out.sort(key=lambda o: o.rep)
    return out
