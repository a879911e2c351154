"""Gale duality between sparse systems and systems of master functions.

A sparse system ``f_i = c_{i,0} + sum_j c_{i,j} x^{w_j}`` is linear in the
monomials ``z_j = x^{w_j}``. Solving those linear equations parametrizes an
affine k-space ``L`` by degree-one forms ``p_i(y)``; the monomial relations
``z^beta = 1`` pull back to the master equations ``p(y)^beta = 1``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import exact
from .errors import DegenerateIntersection, EvenIndex, InconsistentPoint, RankDeficient
from .lattice import ExponentSupport, WeightBasis, normalize_support, relation_kernel, span_index_parity

Form = tuple[Fraction, ...]  # (a0, a1, ..., ak) for a0 + a1*y1 + ... + ak*yk


@dataclass(frozen=True)
class SparseSystem:
    support: ExponentSupport
    coefficients: tuple[tuple[Fraction, ...], ...]  # n rows of length n+k+1

    def __post_init__(self):
        n, m1 = self.support.n, len(self.support.vectors)
        if len(self.coefficients) != n or any(len(r) != m1 for r in self.coefficients):
            raise ValueError(f"coefficient matrix must be {n} x {m1}")
        if any(all(c == 0 for c in r) for r in self.coefficients):
            raise ValueError("an equation is identically zero")
        if exact.rank(self.coefficients) < n:
            raise ValueError("coefficient matrix must have full row rank")

    @classmethod
    def from_data(cls, exponents: Sequence[Sequence[int]], coefficients: Sequence[Sequence]) -> "SparseSystem":
        W = normalize_support(exponents)
        return cls(W, tuple(tuple(exact.as_fraction(c) for c in row) for row in coefficients))

    @property
    def n(self) -> int:
        return self.support.n

    @property
    def k(self) -> int:
        return self.support.k

    def evaluate(self, x: Sequence) -> list:
        """Values of the (normalized) equations at ``x``; exact for rational x."""
        z = phi_w(self.support, x)
        one = z[0] * 0 + 1
        return [row[0] * one + sum((c * zi for c, zi in zip(row[1:], z)), start=0 * one) for row in self.coefficients]

    def perturbed(self, rel: float, seed: int) -> "SparseSystem":
        """Seeded relative perturbation of every nonzero coefficient.

        Each coefficient is scaled by ``1 + rel * u`` with ``u`` a rational in
        ``[-1, 1]`` of denominator 1000, so the result stays exact.
        """
        if rel == 0:
            return self
        rng = random.Random(seed)
        eps = Fraction(rel).limit_denominator(10 ** 12)
        rows = tuple(
            tuple(c * (1 + eps * Fraction(rng.randint(-1000, 1000), 1000)) if c else c for c in row)
            for row in self.coefficients
        )
        return SparseSystem(self.support, rows)


def form_eval(form: Sequence, y: Sequence):
    return form[0] + sum((a * yi for a, yi in zip(form[1:], y)), start=0 * form[0])


@dataclass(frozen=True)
class GaleDual:
    k: int
    forms: tuple[Form, ...]
    weights: WeightBasis
    system: SparseSystem | None = None

    def __post_init__(self):
        if any(len(f) != self.k + 1 for f in self.forms):
            raise ValueError("each form needs k+1 coefficients")
        if len(self.weights.B) != len(self.forms):
            raise ValueError("weight matrix must have one row per form")
        if self.weights.k != self.k:
            raise ValueError("weight matrix must have k columns")

    @classmethod
    def from_forms(cls, forms: Sequence[Sequence], weights: Sequence[Sequence]) -> "GaleDual":
        fs = tuple(tuple(exact.as_fraction(a) for a in f) for f in forms)
        B = WeightBasis(tuple(tuple(exact.as_fraction(b) for b in row) for row in weights))
        return cls(len(fs[0]) - 1, fs, B)

    @property
    def m(self) -> int:
        return len(self.forms)

    @property
    def essential(self) -> bool:
        return exact.rank(self.forms) == self.k + 1

    def linear_rank(self) -> int:
        return exact.rank([f[1:] for f in self.forms]) if self.k else 0


def _max_pivot_elimination(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Full reduction choosing the largest remaining |entry| as pivot.

    Ties go to the lowest column index, then the lowest row. Only the first
    ``ncols`` columns are pivot candidates (the last column is the constant).
    Returns the reduced rows (one per pivot, pivot entry 1) and pivot columns.
    """
    a = [list(r) for r in rows]
    free_rows = list(range(len(a)))
    pivots: list[tuple[int, int]] = []
    used: set[int] = set()
    while free_rows:
        best = None
        for c in range(ncols):
            if c in used:
                continue
            for r in free_rows:
                v = abs(a[r][c])
                if v and (best is None or v > best[0]):
                    best = (v, r, c)
        if best is None:
            break
        _, r, c = best
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        free_rows.remove(r)
        used.add(c)
        pivots.append((r, c))
    return [a[r] for r, _ in pivots], [c for _, c in pivots]


def _forms_from_reduced(reduced, pivots, free, m) -> tuple[Form, ...]:
    k = len(free)
    forms: list[Form | None] = [None] * m
    for slot, col in enumerate(free):
        f = [Fraction(0)] * (k + 1)
        f[slot + 1] = Fraction(1)
        forms[col] = tuple(f)
    for row, col in zip(reduced, pivots):
        # z_col + sum_f row[f] z_f + row[-1] = 0
        forms[col] = tuple([-row[-1]] + [-row[f] for f in free])
    return tuple(forms)  # type: ignore[arg-type]


def build_gale_dual(sys: SparseSystem, free: Sequence[int] | None = None) -> GaleDual:
    """Gale dual of ``sys``.

    By default the linear equations in ``z`` are solved by largest-pivot
    elimination and the k non-pivot coordinates become ``y``. Passing
    ``free`` (0-based indices into ``z_1..z_{n+k}``) fixes the parametrizing
    coordinates instead.
    """
    W = sys.support
    parity = span_index_parity(W)
    if parity.rank_deficient:
        raise RankDeficient("exponent vectors do not span R^n; the system has infinitely many solutions")
    if parity.even:
        raise EvenIndex(f"exponents span a sublattice of even index {parity.index}; the odd-index hypothesis fails")
    m = W.m
    rows = [list(r[1:]) + [r[0]] for r in sys.coefficients]
    if free is None:
        reduced, pivots = _max_pivot_elimination(rows, m)
        free = [c for c in range(m) if c not in pivots]
    else:
        free = list(free)
        pivots = [c for c in range(m) if c not in free]
        order = pivots + free
        perm_rows = [[r[c] for c in order] + [r[-1]] for r in rows]
        red, piv = exact.rref(perm_rows)
        if piv != list(range(len(pivots))):
            raise ValueError("the chosen free coordinates do not give a parametrization")
        reduced = []
        for i, col in enumerate(pivots):
            full = [Fraction(0)] * m + [red[i][-1]]
            for pos, c in enumerate(order):
                full[c] = red[i][pos]
            reduced.append(full)
    if len(pivots) != sys.n:
        raise ValueError("coefficient matrix must have full row rank")
    forms = _forms_from_reduced(reduced, pivots, free, m)
    for i, f in enumerate(forms):
        if all(a == 0 for a in f):
            raise DegenerateIntersection(f"L lies in the coordinate hyperplane z_{i + 1} = 0")
    return GaleDual(len(free), forms, relation_kernel(W), sys)


def push_to_torus_coords(gd: GaleDual, y: Sequence) -> tuple:
    return tuple(form_eval(f, y) for f in gd.forms)


def phi_w(W: ExponentSupport, x: Sequence) -> tuple:
    """``(x^{w_1}, ..., x^{w_{n+k}})``; exact for rational ``x``."""
    out = []
    for w in W.vectors[1:]:
        v = 1
        for xi, e in zip(x, w):
            if e:
                v = v * xi ** e
        out.append(v if not isinstance(v, int) else Fraction(v))
    return tuple(out)


def _best_subset(W: ExponentSupport) -> tuple[list[int], list[list[Fraction]]]:
    """Row subset of full rank whose inverse has the smallest largest entry."""
    best = None
    for S in itertools.combinations(range(W.m), W.n):
        A = [list(W.vectors[i + 1]) for i in S]
        if exact.det(A) == 0:
            continue
        inv = exact.inverse(A)
        score = max(abs(v) for row in inv for v in row)
        if best is None or score < best[0]:
            best = (score, list(S), inv)
    assert best is not None
    return best[1], best[2]


def _gf2_solve(rows: list[list[int]], rhs: list[int], n: int) -> list[int] | None:
    """Unique solution of a full-column-rank GF(2) system, or None if inconsistent."""
    a = [[v & 1 for v in r] + [b & 1] for r, b in zip(rows, rhs)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            raise EvenIndex("exponents do not span (Z/2)^n")
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                a[i] = [u ^ v for u, v in zip(a[i], a[r])]
        r += 1
    if any(row[-1] for row in a[r:]):
        return None
    return [a[i][-1] for i in range(n)]


def lift_to_torus(W: ExponentSupport, z: Sequence, tol: float = 1e-8) -> tuple:
    """The unique ``x`` in ``(R^*)^n`` with ``x^{w_i} = z_i``.

    Magnitudes come from a log-linear solve, signs from a GF(2) solve. When
    ``z`` is exact and the answer is rational it is returned exactly.
    """
    parity = span_index_parity(W)
    if not parity.odd:
        raise EvenIndex("lifting needs an odd-index support")
    if len(z) != W.m:
        raise ValueError(f"expected {W.m} coordinates")
    if any(zi == 0 for zi in z):
        raise InconsistentPoint("all coordinates must be nonzero")
    logs = np.array([math.log(abs(float(zi))) if not isinstance(zi, Fraction) else _log_abs(zi) for zi in z])
    for col in relation_kernel(W).columns:
        r = float(sum(float(b) * l for b, l in zip(col, logs)))
        if abs(r) > tol * max(1.0, float(np.abs(logs).max())):
            raise InconsistentPoint(f"|z^beta| differs from 1 (log residual {r:.3e})")
    bits = _gf2_solve([list(w) for w in W.vectors[1:]], [int(zi < 0) for zi in z], W.n)
    if bits is None:
        raise InconsistentPoint("no sign vector reproduces the signs of z")
    S, inv = _best_subset(W)
    u = np.array([[float(v) for v in row] for row in inv]) @ logs[S]
    # one least-squares Newton step over all monomials
    A = np.array([list(w) for w in W.vectors[1:]], dtype=float)
    u -= np.linalg.lstsq(A, A @ u - logs, rcond=None)[0]
    x = tuple((-1.0 if b else 1.0) * math.exp(v) for b, v in zip(bits, u))
    if all(isinstance(zi, (int, Fraction)) for zi in z):
        xq = _rational_guess(W, x, z)
        if xq is not None:
            return xq
    return x


def _log_abs(q: Fraction) -> float:
    # avoids float overflow for huge numerators/denominators
    return math.log(abs(q.numerator)) - math.log(q.denominator)


def _rational_guess(W: ExponentSupport, x, z) -> tuple | None:
    for bound in (10 ** 6, 10 ** 12):
        guess = tuple(Fraction(v).limit_denominator(bound) for v in x)
        if all(g != 0 for g in guess) and phi_w(W, guess) == tuple(Fraction(v) for v in z):
            return guess
    return None


@dataclass(frozen=True)
class DualityReport:
    passed: bool
    samples: int
    max_linear_residual: Fraction
    max_monomial_residual: Fraction

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "samples": self.samples,
            "max_linear_residual": str(self.max_linear_residual),
            "max_monomial_residual": str(self.max_monomial_residual),
        }


def _rand_fraction(rng: random.Random, span: int = 50) -> Fraction:
    return Fraction(rng.randint(-span * 10, span * 10), rng.randint(1, 10))


def verify_duality(sys: SparseSystem, gd: GaleDual, samples: int = 100, seed: int = 0) -> DualityReport:
    """Exact smoke test of the correspondence.

    Random rational ``y`` off the arrangement must land on ``L`` (every
    ``Lambda_i`` vanishes), and random rational ``x`` must give points
    ``Phi_W(x)`` satisfying every monomial relation ``z^beta = 1``.
    """
    rng = random.Random(seed)
    W = sys.support
    lin = Fraction(0)
    mono = Fraction(0)
    done = 0
    while done < samples:
        y = [_rand_fraction(rng) for _ in range(gd.k)]
        z = push_to_torus_coords(gd, y)
        if any(zi == 0 for zi in z):
            continue
        for row in sys.coefficients:
            lam = row[0] + sum(c * zi for c, zi in zip(row[1:], z))
            lin = max(lin, abs(lam))
        x = [_rand_fraction(rng, 3) or Fraction(1) for _ in range(W.n)]
        zx = phi_w(W, x)
        for col in gd.weights.columns:
            val = Fraction(1)
            for b, zi in zip(col, zx):
                val *= zi ** int(b)
            mono = max(mono, abs(abs(val) - 1))
        done += 1
    return DualityReport(lin == 0 and mono == 0, samples, lin, mono)
