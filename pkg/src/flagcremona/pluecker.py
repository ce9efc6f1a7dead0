"""Exact Pluecker-coordinate models of balanced Grassmannians and the quadric.

The balanced Grassmannian parametrizes n-planes in V_- + V_+ = Q^{2n}; the
first n indices span V_- and the last n span V_+.  C* acts with weight 0 on
V_- and 1 on V_+, so the Pluecker coordinate p(S) has weight |S n V_+|.

The graph of A: V_- -> V_+ is the column span of [I; A].  Its orbit runs
from [V_-] (t -> 0) to [V_+] (t -> oo), and reading the piece next to
[V_+] as a matrix gives adj(A), i.e. A^{-1} projectively.

Subsets are sorted tuples of 1-based indices, ranked colexicographically.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, gcd
from typing import Iterable, Mapping, Sequence

from . import exact
from .exact import Matrix, SingularMatrixError

Subset = tuple[int, ...]


# -- colex indexing -----------------------------------------------------------


def colex_rank(S: Subset) -> int:
    return sum(comb(s - 1, k + 1) for k, s in enumerate(sorted(S)))


@lru_cache(maxsize=None)
def subsets(n: int) -> tuple[Subset, ...]:
    """All n-subsets of {1..2n} in colex order."""
    out = sorted(combinations(range(1, 2 * n + 1), n), key=lambda s: tuple(reversed(s)))
    assert all(colex_rank(s) == k for k, s in enumerate(out))
    return tuple(out)


def subset_weight(S: Iterable[int], n: int) -> int:
    """Number of indices of S lying in V_+ = {n+1..2n}."""
    return sum(1 for s in S if s > n)


def _sorted_sign(seq: Sequence[int]) -> tuple[int, Subset] | None:
    """Sign of the permutation sorting ``seq``; None on a repeated index."""
    if len(set(seq)) != len(seq):
        return None
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


# -- vectors ---------------------------------------------------------------------


@dataclass(frozen=True)
class PlueckerVector:
    n: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != comb(2 * self.n, self.n):
            raise ValueError(f"expected {comb(2 * self.n, self.n)} coordinates for n={self.n}")

    @classmethod
    def from_mapping(cls, n: int, values: Mapping[Subset, object]) -> PlueckerVector:
        c = [Fraction(0)] * comb(2 * n, n)
        for S, x in values.items():
            c[colex_rank(tuple(sorted(S)))] = Fraction(x)
        return cls(n, tuple(c))

    def __getitem__(self, S: Iterable[int]) -> Fraction:
        return self.coords[colex_rank(tuple(sorted(S)))]

    def signed(self, seq: Sequence[int]) -> Fraction:
        """Coordinate at an ordered index sequence (alternating in its entries)."""
        r = _sorted_sign(seq)
        if r is None:
            return Fraction(0)
        sign, S = r
        return sign * self[S]

    def items(self):
        return zip(subsets(self.n), self.coords)

    @property
    def support(self) -> list[Subset]:
        return [S for S, x in self.items() if x]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def weights(self) -> list[int]:
        return sorted({subset_weight(S, self.n) for S in self.support})

    def scaled(self, c) -> PlueckerVector:
        c = Fraction(c)
        return PlueckerVector(self.n, tuple(c * x for x in self.coords))

    def act(self, t) -> PlueckerVector:
        """The C* action: p(S) -> t^{w(S)} p(S)."""
        t = Fraction(t)
        return PlueckerVector(self.n, tuple(x * t ** subset_weight(S, self.n) for S, x in self.items()))

    def proportional(self, other: PlueckerVector) -> Fraction | None:
        return exact.proportional([list(self.coords)], [list(other.coords)])


def _minors(A: Matrix) -> dict[tuple[Subset, Subset], Fraction]:
    """All square minors of A keyed by (rows, cols), 0-based, by Laplace expansion."""
    n = len(A)
    out: dict[tuple[Subset, Subset], Fraction] = {((), ()): Fraction(1)}
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            r0, rest = rows[0], rows[1:]
            for cols in combinations(range(n), k):
                total = Fraction(0)
                for pos, c in enumerate(cols):
                    a = A[r0][c]
                    if a:
                        sub = out[(rest, cols[:pos] + cols[pos + 1 :])]
                        if sub:
                            total += (-a if pos % 2 else a) * sub
                out[(rows, cols)] = total
    return out


def plucker_of_graph(A) -> PlueckerVector:
    """Maximal minors of [I; A]; the minor on rows S is +- a minor of A."""
    A = exact.to_matrix(A)
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("A must be square")
    minors = _minors(A)
    coords = []
    for S in subsets(n):
        T = [s for s in S if s <= n]
        U = tuple(s - n - 1 for s in S if s > n)
        comp = tuple(c for c in range(n) if c + 1 not in T)
        k = len(T)
        sign = -1 if (k * (k + 1) // 2 + sum(T)) % 2 else 1
        coords.append(sign * minors[(U, comp)])
    return PlueckerVector(n, tuple(coords))


def plucker_by_minors(A) -> PlueckerVector:
    """Reference implementation: every maximal minor of [I; A] by elimination."""
    A = exact.to_matrix(A)
    n = len(A)
    M = exact.identity(n) + A
    return PlueckerVector(n, tuple(exact.det([M[s - 1] for s in S]) for S in subsets(n)))


def plucker_of_span(M) -> PlueckerVector:
    """Pluecker vector of the column span of a 2n x n matrix."""
    M = exact.to_matrix(M)
    n = len(M[0])
    if len(M) != 2 * n:
        raise ValueError("expected a 2n x n matrix")
    return PlueckerVector(n, tuple(exact.det([M[s - 1] for s in S]) for S in subsets(n)))


def plucker_relations_hold(p: PlueckerVector, rng: random.Random | None = None, samples: int | None = None) -> bool:
    """Grassmann-Pluecker relations

        sum_k (-1)^k p(I, j_k) p(j_0 .. ^j_k .. j_n) = 0

    over all (n-1)-subsets I and (n+1)-subsets J, or a random sample of them.
    """
    n = p.n
    ground = range(1, 2 * n + 1)
    if samples is None:
        pairs = ((I, J) for I in combinations(ground, n - 1) for J in combinations(ground, n + 1))
    else:
        rng = rng or random.Random(0)
        pairs = (
            (tuple(sorted(rng.sample(ground, n - 1))), tuple(sorted(rng.sample(ground, n + 1)))) for _ in range(samples)
        )
    for I, J in pairs:
        total = Fraction(0)
        for k, j in enumerate(J):
            a = p.signed(I + (j,))
            if a:
                total += (-a if k % 2 else a) * p.signed(J[:k] + J[k + 1 :])
        if total:
            return False
    return True


# -- grading and limits ---------------------------------------------------------


@dataclass(frozen=True)
class GradedSplit:
    n: int
    pieces: dict[int, PlueckerVector]

    def reassemble(self) -> PlueckerVector:
        c = [Fraction(0)] * comb(2 * self.n, self.n)
        for piece in self.pieces.values():
            for k, x in enumerate(piece.coords):
                c[k] += x
        return PlueckerVector(self.n, tuple(c))

    def nonzero(self) -> list[int]:
        return sorted(w for w, p in self.pieces.items() if not p.is_zero())


def graded_split(p: PlueckerVector) -> GradedSplit:
    n = p.n
    pieces = {}
    for w in range(n + 1):
        pieces[w] = PlueckerVector(n, tuple(x if subset_weight(S, n) == w else Fraction(0) for S, x in p.items()))
    return GradedSplit(n, pieces)


@dataclass(frozen=True)
class OrbitLimit:
    limit: PlueckerVector
    weight: int
    next_piece: PlueckerVector | None  # the piece adjacent to the limit, read as a tangent direction
    next_weight: int | None


def orbit_limit(p: PlueckerVector, direction: str = "-") -> OrbitLimit:
    """Limit of t.p as t -> 0 (direction '-') or t -> oo (direction '+')."""
    if direction not in "+-" or len(direction) != 1:
        raise ValueError("direction must be '+' or '-'")
    if p.is_zero():
        raise ValueError("the zero vector is not a point")
    g = graded_split(p)
    ws = g.nonzero()
    if direction == "+":
        ws = ws[::-1]
    nxt = ws[1] if len(ws) > 1 else None
    return OrbitLimit(g.pieces[ws[0]], ws[0], g.pieces[nxt] if nxt is not None else None, nxt)


def identify_hom(g: GradedSplit, end: str) -> Matrix:
    """Read the piece next to [V_-] (end '-') or [V_+] (end '+') as an n x n matrix.

    '-': B[m][k] = (-1)^(n-k) p({1..n} - {k} + {n+m}), which returns A for the graph of A.
    '+': B[k][m] = (-1)^(m-1) p({n+1..2n} - {n+m} + {k}), which returns adj(A).
    """
    n = g.n
    if end == "-":
        piece = g.pieces[1]
        if piece.is_zero():
            raise ValueError("weight-1 piece is zero: the point is not in the open cell of [V_-]")
        base = set(range(1, n + 1))
        return [
            [(-1) ** (n - k) * piece[(base - {k}) | {n + m}] for k in range(1, n + 1)] for m in range(1, n + 1)
        ]
    if end == "+":
        piece = g.pieces[n - 1]
        if piece.is_zero():
            raise ValueError(f"weight-{n - 1} piece is zero: the point is not in the open cell of [V_+]")
        top = set(range(n + 1, 2 * n + 1))
        return [
            [(-1) ** (m - 1) * piece[(top - {n + m}) | {k}] for m in range(1, n + 1)] for k in range(1, n + 1)
        ]
    raise ValueError("end must be '+' or '-'")


def inversion_map(A) -> Matrix:
    """Graph point -> graded split -> matrix at [V_+]; projectively A^{-1}."""
    A = exact.to_matrix(A)
    d = exact.det(A)
    if d == 0:
        raise SingularMatrixError("cannot invert: det = 0")
    return identify_hom(graded_split(plucker_of_graph(A)), "+")


def inversion_scalar(A, B) -> Fraction | None:
    """c with B A = c I, or None."""
    return exact.is_scalar_identity(exact.matmul(exact.to_matrix(B), exact.to_matrix(A)))


# -- symmetric and skew restrictions ------------------------------------------------


def is_symmetric(A: Matrix) -> bool:
    return all(A[k][l] == A[l][k] for k in range(len(A)) for l in range(len(A)))


def is_skew(A: Matrix) -> bool:
    return all(A[k][l] == -A[l][k] for k in range(len(A)) for l in range(len(A)))


@dataclass(frozen=True)
class FormCheck:
    isotropic: bool
    closure: bool | None  # None when not applicable
    note: str = ""


def form_checks(A, kind: str) -> FormCheck:
    """Is graph(A) isotropic for the symplectic or split orthogonal form, and is inversion closed?

    With the identity pairing phi, omega(x_k, x_l) = A_lk - A_kl and
    b(x_k, x_l) = A_lk + A_kl on the graph basis x_k = e_k + A e_k.
    """
    A = exact.to_matrix(A)
    n = len(A)
    if kind == "symplectic":
        form = lambda k, l: A[l][k] - A[k][l]
        same = is_symmetric
    elif kind == "orthogonal":
        form = lambda k, l: A[l][k] + A[k][l]
        same = is_skew
    else:
        raise ValueError("kind must be 'symplectic' or 'orthogonal'")
    iso = all(form(k, l) == 0 for k in range(n) for l in range(n))
    if not iso:
        return FormCheck(False, None, "graph is not isotropic")
    if exact.det(A) == 0:
        note = "structurally singular: skew matrix of odd size" if kind == "orthogonal" and n % 2 else "singular"
        return FormCheck(True, None, note)
    return FormCheck(True, same(inversion_map(A)))


def split_form(n: int) -> Matrix:
    """Gram matrix of q(x) = sum_k x_k x_{n+k} on Q^{2n}."""
    g = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for k in range(n):
        g[k][n + k] = g[n + k][k] = Fraction(1)
    return g


def family_parity(U, U2, q=None) -> bool:
    """Whether two maximal isotropic subspaces lie in the same family.

    The rule is that the projective dimension of the intersection is
    congruent to n - 1 mod 2.  So the spans agree when the vector-space
    intersection has dimension congruent to n.
    """
    U = exact.to_matrix(U)
    U2 = exact.to_matrix(U2)
    n = len(U[0])
    G = exact.to_matrix(q) if q is not None else split_form(n)
    for M in (U, U2):
        if len(M) != 2 * n or exact.rank(M) != n:
            raise ValueError("expected a 2n x n basis of rank n")
        if not exact.is_zero(exact.matmul(exact.transpose(M), exact.matmul(G, M))):
            raise ValueError("subspace is not isotropic")
    joined = [a + b for a, b in zip(U, U2)]
    inter = 2 * n - exact.rank(joined)
    return (inter - 1) % 2 == (n - 1) % 2


def coordinate_spaces(n: int) -> tuple[Matrix, Matrix]:
    """Bases of V_- and V_+."""
    I = exact.identity(n)
    Z = [[Fraction(0)] * n for _ in range(n)]
    return I + Z, Z + I


# -- the quadric -----------------------------------------------------------------------


def standard_quadric(m: int) -> Matrix:
    """Gram matrix S of q(u) = u^T S u = sum u_k u_{m+1-k} (pairs) plus u_c^2 in the middle."""
    S = [[Fraction(0)] * m for _ in range(m)]
    for k in range(m):
        j = m - 1 - k
        S[k][j] = Fraction(1) if k == j else Fraction(1, 2)
    return S


@dataclass(frozen=True)
class QuadricModel:
    """z_- z_+ = q(u) in P^{m+1}, coordinates (z_-, u_1..u_m, z_+) of weights (0, 1, .., 1, 2)."""

    m: int
    S: Matrix

    @classmethod
    def make(cls, m: int, S=None) -> QuadricModel:
        S = standard_quadric(m) if S is None else exact.to_matrix(S)
        if len(S) != m or not is_symmetric(S):
            raise ValueError("q must be given by a symmetric m x m matrix")
        if exact.det(S) == 0:
            raise ValueError("degenerate quadratic form")
        return cls(m, S)

    def q(self, u) -> Fraction:
        nz = [(a, Fraction(u[a])) for a in range(self.m) if u[a]]
        total = Fraction(0)
        for a, ua in nz:
            row = self.S[a]
            total += ua * sum((row[b] * ub for b, ub in nz), Fraction(0))
        return total

    def contains(self, point) -> bool:
        return Fraction(point[0]) * point[-1] == self.q(point[1:-1])

    def gradient(self, point) -> list[Fraction]:
        u = point[1:-1]
        nz = [(b, u[b]) for b in range(self.m) if u[b]]
        du = [-2 * sum((self.S[a][b] * ub for b, ub in nz), Fraction(0)) for a in range(self.m)]
        return [Fraction(point[-1])] + du + [Fraction(point[0])]


def _plane_tangent(model: QuadricModel, v, at_plus: bool) -> list[Fraction]:
    """Tangent direction at the far fixed point of the conic in the plane <P_-, [0:v:0], P_+>."""
    m = model.m
    v = [Fraction(x) for x in v]
    if not any(v):
        raise ValueError("the zero vector is not a direction")
    P_minus = [Fraction(1)] + [Fraction(0)] * m + [Fraction(0)]
    P_plus = [Fraction(0)] * (m + 1) + [Fraction(1)]
    D = [Fraction(0)] + v + [Fraction(0)]
    basis = [P_minus, D, P_plus]
    target = P_plus if at_plus else P_minus
    # the plane meets the quadric in a * c = b^2 q(v); it passes through both poles
    qv = model.q(v)
    for a, b, c in ((1, 0, 0), (0, 0, 1)):
        pt = [a * x + b * y + c * z for x, y, z in zip(*basis)]
        assert model.contains(pt) and (a * c == b * b * qv)
    g = model.gradient(target)
    # restrict the tangent hyperplane g.x = 0 to the plane: coefficients on (P_-, D, P_+)
    h = [sum((gi * xi for gi, xi in zip(g, e)), Fraction(0)) for e in basis]
    # the tangent line is the kernel of h inside the plane; take the kernel vector not equal to the pole
    pole = (2 if at_plus else 0)
    others = [k for k in range(3) if k != pole]
    if h[others[0]] == 0 and h[others[1]] == 0:
        raise ValueError("plane is contained in the tangent hyperplane")
    coeffs = [Fraction(0)] * 3
    if h[others[0]] == 0:
        coeffs[others[0]] = Fraction(1)
    elif h[others[1]] == 0:
        coeffs[others[1]] = Fraction(1)
    else:
        coeffs[others[0]] = h[others[1]]
        coeffs[others[1]] = -h[others[0]]
    if h[pole]:
        raise ValueError("pole is not on its own tangent line")
    # in the affine chart at the pole the kernel vector has direction (c_far, c_D * v);
    # it lies in the tangent space, so c_far = 0; scaled to c_D = 1 it is v itself
    far = 0 if at_plus else 2
    if coeffs[far] != 0 or coeffs[1] == 0:
        raise ValueError("tangent line leaves the tangent space")
    return list(v)


@lru_cache(maxsize=64)
def _model(m: int, key) -> QuadricModel:
    return QuadricModel.make(m, None if key is None else [list(r) for r in key])


def quadric_model(m: int, S=None) -> QuadricModel:
    key = None if S is None else tuple(tuple(Fraction(x) for x in row) for row in S)
    return _model(m, key)


def quadric_psi(m: int, v, S=None, dual: bool = False) -> list[Fraction]:
    """The induced map from directions at P_- to directions at P_+.

    With ``dual`` the result is returned through the polarity of q, so a
    coordinate direction goes to its paired coordinate direction.
    """
    model = quadric_model(m, S)
    w = _plane_tangent(model, v, at_plus=True)
    if dual:
        w = [2 * sum((model.S[a][b] * w[b] for b in range(m)), Fraction(0)) for a in range(m)]
    return w


def quadric_psi_inverse(m: int, w, S=None, dual: bool = False) -> list[Fraction]:
    model = quadric_model(m, S)
    if dual:
        w = exact.matvec(exact.inverse(exact.scale(model.S, 2)), w)
    return _plane_tangent(model, w, at_plus=False)


# -- AM vs FM ------------------------------------------------------------------------------


@dataclass(frozen=True)
class AmFm:
    degree: int
    delta_mu: int
    equal: bool


def am_vs_fm(p: PlueckerVector) -> AmFm:
    """Degree of the orbit closure of p against the weight gap of its limits.

    The orbit map t -> t.p factors through t -> t^g with g the gcd of the
    weight gaps, so the closure is a rational curve of degree (max-min)/g.
    """
    if p.is_zero():
        raise ValueError("the zero vector is not a point")
    ws = p.weights()
    if len(ws) < 2:
        raise ValueError("fixed point: the orbit is 0-dimensional")
    g = 0
    for w in ws[1:]:
        g = gcd(g, w - ws[0])
    lo, hi = orbit_limit(p, "-").weight, orbit_limit(p, "+").weight
    degree = (ws[-1] - ws[0]) // g
    return AmFm(degree, hi - lo, degree == hi - lo)


def ambient_bandwidth(model: str, n: int) -> int:
    """Bandwidth of the graph model in the ambient Pluecker embedding.

    For skew matrices the model is the spinor variety, whose generator
    pulls back to half the Pluecker class: the ambient value is 2 * (n/2).
    """
    if model in ("general", "symmetric"):
        return n
    if model == "skew":
        if n % 2:
            raise ValueError("the skew model needs n even")
        return 2 * (n // 2)
    raise ValueError(f"unknown model {model!r}")


# -- random exact inputs -------------------------------------------------------------------


def random_fraction(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_matrix(n: int, rng: random.Random, kind: str = "general", bound: int = 9) -> Matrix:
    A = [[random_fraction(rng, bound) for _ in range(n)] for _ in range(n)]
    if kind == "symmetric":
        A = [[A[min(k, l)][max(k, l)] for l in range(n)] for k in range(n)]
    elif kind == "skew":
        A = [[(A[k][l] if k < l else -A[l][k]) if k != l else Fraction(0) for l in range(n)] for k in range(n)]
    elif kind != "general":
        raise ValueError(f"unknown kind {kind!r}")
    return A


def random_invertible(n: int, rng: random.Random, kind: str = "general", bound: int = 9) -> Matrix:
    if kind == "skew" and n % 2:
        raise ValueError("skew matrices of odd size are singular")
    while True:
        A = random_matrix(n, rng, kind, bound)
        if exact.det(A) != 0:
            return A


# -- batches ------------------------------------------------------------------------------


def verify_inversion(n: int, count: int, seed: int, kind: str = "general") -> list[dict]:
    """Random invertible inputs; per case: B A = c I and psi(psi(A)) ~ A."""
    rng = random.Random(seed)
    out = []
    for case in range(count):
        t0 = time.perf_counter()
        A = random_invertible(n, rng, kind)
        B = inversion_map(A)
        c = inversion_scalar(A, B)
        back = exact.proportional(inversion_map(B), A)
        ok = c is not None and back is not None
        if kind == "symmetric":
            ok = ok and is_symmetric(B)
        elif kind == "skew":
            ok = ok and is_skew(B)
        out.append(
            {
                "case": case,
                "pass": ok,
                "c": exact.fmt(c) if c is not None else None,
                "seconds": round(time.perf_counter() - t0, 6),
            }
        )
    return out


def verify_quadric(m: int, seed: int, count: int = 20, form: str = "random") -> list[dict]:
    """Totality, linearity and invertibility of the quadric map on random directions.

    ``form`` is 'standard' (sum of products) or 'random' (a random
    nondegenerate symmetric Gram matrix drawn from the seed).
    """
    rng = random.Random(seed)
    if form == "standard":
        S = None
    elif form == "random":
        S = random_invertible(m, rng, "symmetric")
    else:
        raise ValueError(f"unknown form {form!r}")
    out = []
    for case in range(count):
        t0 = time.perf_counter()
        v = [random_fraction(rng) for _ in range(m)]
        while not any(v):
            v = [random_fraction(rng) for _ in range(m)]
        w = [random_fraction(rng) for _ in range(m)]
        while not any(w):
            w = [random_fraction(rng) for _ in range(m)]
        a, b = random_fraction(rng), random_fraction(rng)
        while a == 0:
            a = random_fraction(rng)
        pv, pw = quadric_psi(m, v, S), quadric_psi(m, w, S)
        lin_scale = quadric_psi(m, [a * x for x in v], S) == [a * x for x in pv]
        vw = [x + y for x, y in zip(v, w)]
        lin_add = not any(vw) or quadric_psi(m, vw, S) == [x + y for x, y in zip(pv, pw)]
        inverse = quadric_psi_inverse(m, pv, S) == [Fraction(x) for x in v]
        out.append(
            {
                "case": case,
                "pass": lin_scale and lin_add and inverse,
                "linear": lin_scale and lin_add,
                "inverse": inverse,
                "seconds": round(time.perf_counter() - t0, 6),
            }
        )
    return out
