"""Exact integer lattice computations on exponent supports.

Everything in this module uses Python integers and ``Fraction``; no floating
point is involved, so parity and kernel results are certificates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact
from .errors import DuplicateExponent, RankDeficient, UnsupportedDimension

IntVector = tuple[int, ...]


@dataclass(frozen=True)
class ExponentSupport:
    """Exponent vectors ``w_0 = 0, w_1, ..., w_{n+k}`` of a sparse system.

    ``translation`` is the vector that was subtracted from the raw input to
    put ``w_0`` at the origin (multiplying by ``x**(-translation)`` does not
    change the nonzero solutions).
    """

    n: int
    vectors: tuple[IntVector, ...]
    translation: IntVector = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ambient dimension must be positive")
        if any(len(v) != self.n for v in self.vectors):
            raise ValueError("all exponent vectors must have length n")
        if not self.vectors or any(self.vectors[0]):
            raise ValueError("first exponent vector must be the origin; use normalize_support")
        if len(set(self.vectors)) != len(self.vectors):
            raise DuplicateExponent("exponent vectors must be distinct")
        if len(self.vectors) < self.n + 1:
            raise ValueError("need at least n+1 exponent vectors (k >= 0)")

    @property
    def k(self) -> int:
        return len(self.vectors) - self.n - 1

    @property
    def m(self) -> int:
        """Number of nonzero exponents, n + k."""
        return len(self.vectors) - 1

    def matrix(self) -> list[list[int]]:
        """The n x (n+k) integer matrix with columns w_1, ..., w_{n+k}."""
        return [[w[r] for w in self.vectors[1:]] for r in range(self.n)]


@dataclass(frozen=True)
class WeightBasis:
    """Columns of ``B`` are integer (or rational) relations among w_1..w_{n+k}."""

    B: tuple[tuple[Fraction, ...], ...]  # (n+k) rows, k columns

    @property
    def k(self) -> int:
        return len(self.B[0]) if self.B else 0

    @property
    def columns(self) -> list[tuple[Fraction, ...]]:
        return [tuple(row[j] for row in self.B) for j in range(self.k)]


def normalize_support(vectors: Sequence[Sequence[int]]) -> ExponentSupport:
    vecs = [tuple(int(c) for c in v) for v in vectors]
    if not vecs:
        raise ValueError("support must be nonempty")
    if len(set(vecs)) != len(vecs):
        raise DuplicateExponent("duplicate exponent vectors")
    shift = vecs[0]
    moved = tuple(tuple(a - b for a, b in zip(v, shift)) for v in vecs)
    return ExponentSupport(n=len(shift), vectors=moved, translation=shift)


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Return ``(D, U, V)`` with ``D = U M V`` diagonal, ``U, V`` unimodular.

    The diagonal entries are nonnegative and each divides the next.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty |= A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V


@dataclass(frozen=True)
class SpanIndex:
    """Index of the sublattice spanned by a support; ``None`` when rank < n."""

    index: int | None

    @property
    def rank_deficient(self) -> bool:
        return self.index is None

    @property
    def odd(self) -> bool:
        return self.index is not None and self.index % 2 == 1

    @property
    def even(self) -> bool:
        return self.index is not None and self.index % 2 == 0

    def __str__(self) -> str:
        if self.index is None:
            return "RankDeficient"
        return f"{'Odd' if self.odd else 'Even'}({self.index})"


def _diagonal(D) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def span_index_parity(W: ExponentSupport) -> SpanIndex:
    if W.m == 0:
        return SpanIndex(None)
    D, _, _ = smith_normal_form(W.matrix())
    diag = _diagonal(D)
    if len(diag) < W.n or any(d == 0 for d in diag[: W.n]):
        return SpanIndex(None)
    return SpanIndex(math.prod(diag[: W.n]))


def _hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer basis (full row rank)."""
    A = [list(r) for r in rows]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        while True:
            nz = [(abs(A[i][c]), i) for i in range(r, nrows) if A[i][c]]
            if not nz:
                break
            _, piv = min(nz)
            A[r], A[piv] = A[piv], A[r]
            done = True
            for i in range(r + 1, nrows):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    done &= A[i][c] == 0
            if done:
                break
        if r < nrows and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            r += 1
    return A


def relation_kernel(W: ExponentSupport) -> WeightBasis:
    """Integer basis of the relations ``sum_i b_i w_i = 0`` among w_1..w_{n+k}.

    The basis is returned in Hermite normal form, so each column is primitive
    with first nonzero entry positive.
    """
    M = W.matrix()
    D, _, V = smith_normal_form(M)
    r = sum(1 for d in _diagonal(D) if d)
    if r < W.n:
        raise RankDeficient("exponent vectors do not span R^n; the system has infinitely many solutions")
    m = W.m
    kernel = [[V[i][j] for i in range(m)] for j in range(r, m)]
    kernel = _hermite_rows(kernel)
    for vec in kernel:
        assert all(sum(b * w[row] for b, w in zip(vec, W.vectors[1:])) == 0 for row in range(W.n))
        assert math.gcd(*vec) == 1
    B = tuple(tuple(Fraction(kernel[j][i]) for j in range(len(kernel))) for i in range(m))
    return WeightBasis(B)


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Andrew's monotone chain with exact integer orientation tests."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _det3(a, b, c) -> int:
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def normalized_volume(points: Sequence[Sequence[int]]) -> int:
    """``n! * vol(conv(points))`` for integer points in dimension n <= 3."""
    pts = [tuple(int(c) for c in p) for p in points]
    n = len(pts[0])
    if n == 1:
        xs = [p[0] for p in pts]
        return max(xs) - min(xs)
    if n == 2:
        hull = convex_hull_2d(pts)
        if len(hull) < 3:
            return 0
        return abs(sum(_cross((0, 0), hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))))
    if n == 3:
        return _volume3(pts)
    raise UnsupportedDimension(f"volume computation implemented for n <= 3, got n = {n}")


def _volume3(pts: list[tuple[int, ...]]) -> int:
    # Facet planes by exact brute force: a triple spans a facet plane when all
    # points lie weakly on one side. Each facet polygon is fan-triangulated and
    # coned to a fixed hull point, giving 6 * volume as a sum of |det|.
    uniq = sorted(set(pts))
    o = uniq[0]
    rel = [tuple(a - b for a, b in zip(p, o)) for p in uniq]
    if exact.rank(rel) < 3:
        return 0
    planes = {}
    for a, b, c in itertools.combinations(range(len(uniq)), 3):
        pa, pb, pc = uniq[a], uniq[b], uniq[c]
        u = [pb[i] - pa[i] for i in range(3)]
        v = [pc[i] - pa[i] for i in range(3)]
        nrm = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        if nrm == (0, 0, 0):
            continue
        g = math.gcd(*nrm)
        nrm = tuple(x // g for x in nrm)
        off = sum(x * y for x, y in zip(nrm, pa))
        sides = [sum(x * y for x, y in zip(nrm, p)) - off for p in uniq]
        if all(s >= 0 for s in sides):
            nrm, off = tuple(-x for x in nrm), -off
        elif not all(s <= 0 for s in sides):
            continue
        planes[(nrm, off)] = [p for p in uniq if sum(x * y for x, y in zip(nrm, p)) == off]
    total = 0
    for (nrm, _), face in planes.items():
        # order the facet's points around its centroid, using the 2D projection
        # that drops the coordinate where the normal is largest
        drop = max(range(3), key=lambda i: abs(nrm[i]))
        keep = [i for i in range(3) if i != drop]
        proj = [(p[keep[0]], p[keep[1]]) for p in face]
        hull2 = convex_hull_2d(proj)
        lookup = {(p[keep[0]], p[keep[1]]): p for p in face}
        poly = [lookup[q] for q in hull2]
        for i in range(1, len(poly) - 1):
            a, b, c = poly[0], poly[i], poly[i + 1]
            total += abs(_det3(*[[x - y for x, y in zip(q, o)] for q in (a, b, c)]))
    return total


def kouchnirenko_bound(W: ExponentSupport) -> int:
    """Kouchnirenko's bound ``n! vol(conv W)`` on nondegenerate torus solutions."""
    if W.n > 3:
        raise UnsupportedDimension(f"Kouchnirenko bound implemented for n <= 3, got n = {W.n}")
    return normalized_volume(W.vectors)
