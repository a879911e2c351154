"""Master functions, their Jacobian chain, and the cleared polynomials F_i.

With ``P = prod_i p_i`` the gradient of ``psi_j = sum_i b_ij log|p_i|`` is
``G_j / P`` where ``G_j = sum_i b_ij grad(p_i) prod_{l != i} p_l``. For k = 2
this gives

    F_0 = Gamma_2 * P   = det[G_1; G_2] / P
    F_1 = Gamma_1 * P^2 = det[G_1; P grad F_0 - F_0 grad P] / P

and both divisions by ``P`` are exact.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import exact
from .errors import ClearingFailure, OnArrangement, UnsupportedK
from .gale import GaleDual, form_eval
from .poly import Poly, product


@dataclass(frozen=True)
class MasterSystem:
    """``psi_j(y) = sum_i B[i][j] log|p_i(y)|`` for the forms of ``gd``.

    ``B`` defaults to the Gale weights but may be any real matrix (after a
    basis change, or with irrational weights).
    """

    gd: GaleDual
    B: tuple[tuple, ...]

    @classmethod
    def from_gale(cls, gd: GaleDual, T: Sequence[Sequence] | None = None) -> "MasterSystem":
        B = [list(r) for r in gd.weights.B]
        if T is not None:
            B = exact.matmul(B, [[exact.as_fraction(v) for v in row] for row in T])
        return cls(gd, tuple(tuple(r) for r in B))

    @property
    def k(self) -> int:
        return self.gd.k

    @property
    def m(self) -> int:
        return self.gd.m

    @property
    def n(self) -> int:
        return self.m - self.k

    @property
    def is_exact(self) -> bool:
        return all(isinstance(b, (int, Fraction)) for row in self.B for b in row) and all(
            isinstance(a, Fraction) for f in self.gd.forms for a in f
        )

    def nonconstant(self) -> list[int]:
        return [i for i, f in enumerate(self.gd.forms) if any(a != 0 for a in f[1:])]

    def infinity_weights(self) -> tuple:
        """Weights of the hyperplane at infinity, ``-sum b_ij`` over nonconstant forms.

        Constant forms contribute only constants to psi and are not hyperplanes.
        """
        idx = self.nonconstant()
        return tuple(-sum(self.B[i][j] for i in idx) for j in range(self.k))

    def vanishing_minors(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Square minors of ``B`` (with the infinity row appended) that vanish."""
        rows = [list(self.B[i]) for i in self.nonconstant()] + [list(self.infinity_weights())]
        bad = []
        for size in range(1, self.k + 1):
            for ri in combinations(range(len(rows)), size):
                for ci in combinations(range(self.k), size):
                    sub = [[rows[r][c] for c in ci] for r in ri]
                    if _det(sub) == 0:
                        bad.append((ri, ci))
        return bad

    # numerics -------------------------------------------------------------
    def form_values(self, y: Sequence) -> list:
        return [form_eval(f, y) for f in self.gd.forms]

    def _checked_values(self, y) -> np.ndarray:
        vals = np.array([float(v) for v in self.form_values(y)])
        eps = 1e-12 * (1 + float(np.linalg.norm(np.asarray(y, dtype=float))))
        near = np.flatnonzero(np.abs(vals) < eps)
        if near.size:
            raise OnArrangement(f"point lies on hyperplane p_{near[0] + 1} = 0")
        return vals

    def eval_psi(self, y: Sequence) -> np.ndarray:
        vals = self._checked_values(y)
        B = np.array(self.B, dtype=float)
        return B.T @ np.log(np.abs(vals))

    def eval_grad_psi(self, y: Sequence) -> np.ndarray:
        vals = self._checked_values(y)
        B = np.array(self.B, dtype=float)
        A = np.array([[float(a) for a in f[1:]] for f in self.gd.forms])
        return B.T @ (A / vals[:, None])


def _det(rows) -> object:
    if len(rows) == 1:
        return rows[0][0]
    if len(rows) == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    return exact.det(rows)


@dataclass(frozen=True)
class RationalFunctionExpr:
    """``numerator / P**den_power`` with ``P`` the product of all forms."""

    numerator: Poly
    den_power: int


@dataclass(frozen=True)
class GammaChain:
    k: int
    n: int
    P: Poly
    forms: tuple[Poly, ...]
    gammas: tuple[RationalFunctionExpr, ...]  # gammas[j-1] is Gamma_j
    F: tuple[Poly, ...]  # F[i] = Gamma_{k-i} * P^(2^i)

    def degree_bound(self, i: int) -> int:
        return 2 ** i * self.n

    def degrees(self) -> list[int]:
        return [f.degree() for f in self.F]

    def strict_degrees(self) -> list[bool]:
        """Which F_i fall strictly below the bound ``2^i n``."""
        return [f.degree() < self.degree_bound(i) for i, f in enumerate(self.F)]


def _grad(p: Poly) -> list[Poly]:
    return [p.diff(i) for i in range(p.nvars)]


def _divide_by_forms(num: Poly, forms: Sequence[Poly], tol: float | None) -> Poly:
    for f in forms:
        if f.degree() == 0:
            num = num * (1 / next(iter(f.terms.values())))
        else:
            num = num.divide_linear(f, tol)
    return num


def build_gamma_chain(ms: MasterSystem, float_tol: float = 1e-10) -> GammaChain:
    k = ms.k
    if k not in (1, 2):
        raise UnsupportedK(f"symbolic Gamma chains are implemented for k <= 2, got k = {k}")
    tol = None if ms.is_exact else float_tol
    conv = (lambda v: v) if ms.is_exact else float
    forms = tuple(Poly.affine([conv(a) for a in f]) for f in ms.gd.forms)
    B = [[conv(b) for b in row] for row in ms.B]
    m = len(forms)
    P = product(forms, k)
    cofactor = [product((forms[l] for l in range(m) if l != i), k) for i in range(m)]
    grads = [[f.diff(v) for v in range(k)] for f in forms]
    # G[j][v] = sum_i b_ij d(p_i)/dy_v prod_{l != i} p_l
    G = [
        [sum((cofactor[i] * grads[i][v] * B[i][j] for i in range(m)), start=Poly(k)) for v in range(k)]
        for j in range(k)
    ]
    if k == 1:
        F0 = G[0][0]
        F = (_clean(F0, tol),)
        gammas = (RationalFunctionExpr(F[0], 1),)
    else:
        det12 = G[0][0] * G[1][1] - G[0][1] * G[1][0]
        F0 = _clean(_divide_by_forms(det12, forms, tol), tol)
        gF0, gP = _grad(F0), _grad(P)
        H = [gF0[v] * P - F0 * gP[v] for v in range(2)]
        num = G[0][0] * H[1] - G[0][1] * H[0]
        F1 = _clean(_divide_by_forms(num, forms, tol), tol)
        F = (F0, F1)
        # Gamma_1 = F_1 / P^2, Gamma_2 = F_0 / P
        gammas = (RationalFunctionExpr(F1, 2), RationalFunctionExpr(F0, 1))
    n = m - k
    for i, f in enumerate(F):
        if f.degree() > 2 ** i * n:
            raise ClearingFailure(f"deg F_{i} = {f.degree()} exceeds 2^{i} n = {2 ** i * n}")
    return GammaChain(k, n, P, forms, gammas, F)


def _clean(p: Poly, tol: float | None) -> Poly:
    return p if tol is None else p.prune(tol)


def random_unimodular(k: int, rng: random.Random, span: int = 3) -> list[list[int]]:
    """Product of random elementary integer matrices (determinant 1)."""
    T = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(2 * k):
        i, j = rng.sample(range(k), 2) if k > 1 else (0, 0)
        if i == j:
            break
        c = rng.choice([v for v in range(-span, span + 1) if v])
        T = [[T[r][col] + (c * T[j][col] if r == i else 0) for col in range(k)] for r in range(k)]
    return T


def generic_basis(ms: MasterSystem, seed: int = 0, tries: int = 200) -> MasterSystem:
    """Change weight basis ``B -> B T`` until no entry (incl. infinity row) is zero.

    The solution set of the master system does not change under an
    invertible ``T``. Vanishing 2x2 minors are basis-independent and are left
    for the caller to report.
    """
    if ms.k == 1:
        return ms
    rng = random.Random(seed)

    def entries_ok(cand: MasterSystem) -> bool:
        rows = [cand.B[i] for i in cand.nonconstant()] + [cand.infinity_weights()]
        return all(v != 0 for r in rows for v in r)

    if entries_ok(ms):
        return ms
    for _ in range(tries):
        T = random_unimodular(ms.k, rng)
        cand = MasterSystem(ms.gd, tuple(tuple(r) for r in exact.matmul([list(r) for r in ms.B], T)))
        if entries_ok(cand):
            return cand
    return ms


def psi_limit_at_infinity(ms: MasterSystem) -> float:
    """For k = 1 with zero total weight, the finite value of psi at +-infinity."""
    return float(sum(float(row[0]) * math.log(abs(float(f[1] if f[1] != 0 else f[0]))) for row, f in zip(ms.B, ms.gd.forms)))
