"""Independent reference computations used by the tests.

These avoid the package's own algorithms: roots come from closing the
simple roots under reflections, Weyl groups of small rank are listed in
full, and determinants use cofactor expansion.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import numpy as np


def reflect(cartan, i: int, v):
    """r_i(v) = v - <v, a_i^vee> a_i with <a_j, a_i^vee> = C[j][i]; i is 0-based."""
    pair = sum(v[j] * cartan[j][i] for j in range(len(v)))
    out = list(v)
    out[i] -= pair
    return tuple(out)


def roots_by_reflection(cartan) -> set[tuple[int, ...]]:
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    stack = list(simple)
    while stack:
        v = stack.pop()
        for i in range(n):
            w = reflect(cartan, i, v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def positive_count(letter: str, n: int) -> int:
    return {
        "A": n * (n + 1) // 2,
        "B": n * n,
        "C": n * n,
        "D": n * (n - 1),
    }.get(letter) or {("E", 6): 36, ("E", 7): 63, ("E", 8): 120, ("F", 4): 24, ("G", 2): 6}[(letter, n)]


def whole_group(cartan) -> list[np.ndarray]:
    """Every element of a small Weyl group as a matrix (closure under simple reflections)."""
    n = len(cartan)
    gens = []
    for i in range(n):
        s = np.eye(n, dtype=np.int64)
        s[i, :] -= np.asarray(cartan)[:, i]
        gens.append(s)
    seen = {np.eye(n, dtype=np.int64).tobytes(): np.eye(n, dtype=np.int64)}
    frontier = [np.eye(n, dtype=np.int64)]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = s @ g
                key = h.tobytes()
                if key not in seen:
                    seen[key] = h
                    nxt.append(h)
        frontier = nxt
    return list(seen.values())


def cofactor_det(M) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(M[0][0])
    total = Fraction(0)
    for c in range(n):
        if M[0][c]:
            minor = [row[:c] + row[c + 1 :] for row in M[1:]]
            total += (-1) ** c * Fraction(M[0][c]) * cofactor_det(minor)
    return total


def leibniz_det(M) -> Fraction:
    n = len(M)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = Fraction(-1 if inv % 2 else 1)
        for r, c in enumerate(perm):
            term *= M[r][c]
        total += term
    return total


def gauss_inverse(M):
    """Plain Gauss-Jordan on Fractions, written independently of the package."""
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = max(range(c, n), key=lambda r: a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]
