"""Sparse multivariate polynomials with exact (or float) coefficients.

A :class:`Poly` is a mapping ``exponent tuple -> coefficient`` in a fixed
number of variables. It is deliberately small: the master-function machinery
only ever needs products, derivatives, evaluation and exact division by
affine-linear forms in at most a handful of variables.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ClearingFailure

Exponent = tuple[int, ...]


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        self.terms: dict[Exponent, object] = {}
        if terms:
            for e, c in terms.items():
                if c != 0:
                    if len(e) != nvars:
                        raise ValueError("exponent length does not match number of variables")
                    self.terms[tuple(e)] = c

    # construction -----------------------------------------------------------
    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def affine(cls, coeffs: Sequence) -> "Poly":
        """``c0 + c1*y1 + ... + ck*yk`` from ``[c0, c1, ..., ck]``."""
        nv = len(coeffs) - 1
        terms = {(0,) * nv: coeffs[0]}
        for i, c in enumerate(coeffs[1:]):
            e = [0] * nv
            e[i] = 1
            terms[tuple(e)] = c
        return cls(nv, terms)

    @classmethod
    def univariate(cls, coeffs: Sequence) -> "Poly":
        """From a low-to-high coefficient list."""
        return cls(1, {(i,): c for i, c in enumerate(coeffs)})

    # basic protocol ---------------------------------------------------------
    def copy(self) -> "Poly":
        return Poly(self.nvars, self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(f"y{i + 1}" + (f"^{d}" if d > 1 else "") for i, d in enumerate(e) if d)
            parts.append(f"({self.terms[e]})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v != 0:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if other == 0:
                return Poly(self.nvars)
            return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        out: dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result = Poly.constant(self.nvars, Fraction(1))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly(self.nvars, out)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, d in zip(point, e):
                if d:
                    term = term * x ** d
            total = total + term
        return total

    def map_coeffs(self, fn) -> "Poly":
        return Poly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def max_abs_coeff(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    def prune(self, rel_tol: float) -> "Poly":
        """Drop float coefficients below ``rel_tol`` times the largest one."""
        cut = rel_tol * self.max_abs_coeff()
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if abs(c) > cut})

    def divide_linear(self, form: "Poly", tol: float | None = None) -> "Poly":
        """Exact quotient by a degree-one polynomial.

        Long division in the variable with the largest coefficient in ``form``.
        With exact coefficients any nonzero remainder raises
        :class:`ClearingFailure`; with floats the remainder must be below
        ``tol`` relative to the dividend.
        """
        lin = [(abs(float(form.terms.get(_unit(self.nvars, i), 0))), i) for i in range(self.nvars)]
        _, v = max(lin)
        lead = form.terms.get(_unit(self.nvars, v), 0)
        if lead == 0:
            raise ClearingFailure("cannot divide by a constant form")
        r = self.copy()
        q: dict[Exponent, object] = {}
        # repeatedly cancel the terms of highest degree in variable v
        while True:
            top = r.degree_in(v)
            if top <= 0:
                break
            top_terms = {e: c for e, c in r.terms.items() if e[v] == top}
            for e, c in top_terms.items():
                qe = list(e)
                qe[v] -= 1
                qe = tuple(qe)
                coef = c / lead
                q[qe] = q.get(qe, 0) + coef
                r = r - Poly(self.nvars, {qe: coef}) * form
                # exact cancellation of the leading term when coefficients are floats
                r.terms.pop(e, None)
        if not r.is_zero():
            if tol is None:
                raise ClearingFailure(f"nonzero remainder {r!r} dividing by {form!r}")
            if r.max_abs_coeff() > tol * max(self.max_abs_coeff(), 1e-300):
                raise ClearingFailure(f"remainder too large ({r.max_abs_coeff():.3e})")
        return Poly(self.nvars, q)

    def homogeneous_terms(self, degree: int | None = None) -> list[tuple[object, tuple[int, ...]]]:
        """Terms of the homogenization ``Y0^d * f(Y1/Y0, ...)`` as ``(coef, (e0, e1, ...))``."""
        d = self.degree() if degree is None else degree
        return [(c, (d - sum(e),) + e) for e, c in self.terms.items()]

    def univariate_coeffs(self) -> list:
        """Low-to-high coefficients of a one-variable polynomial."""
        if self.nvars != 1:
            raise ValueError("not univariate")
        d = self.degree()
        return [self.terms.get((i,), 0) for i in range(d + 1)]


def _unit(nvars: int, i: int) -> Exponent:
    e = [0] * nvars
    e[i] = 1
    return tuple(e)


def product(polys: Iterable[Poly], nvars: int) -> Poly:
    out = Poly.constant(nvars, Fraction(1))
    for p in polys:
        out = out * p
    return out
