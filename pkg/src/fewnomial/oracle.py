"""Exact brute-force counting of nonzero real solutions (n <= 2).

This module deliberately shares nothing with the Gale/Khovanskii-Rolle path:
univariate systems go through Sturm sequences, bivariate ones through a
sheared resultant. Arithmetic is exact rational; floating point is only used
to report approximate root locations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import sympy

from . import univariate as uv
from .bounds import new_bound
from .errors import PositiveDimensional, UnsupportedDimension, ZeroPolynomial
from .gale import SparseSystem
from .lattice import kouchnirenko_bound, span_index_parity

PolyDict = dict[tuple[int, ...], Fraction]

_SHEARS = [Fraction(1, 3), Fraction(-2, 5), Fraction(3, 7), Fraction(-5, 11), Fraction(7, 13), Fraction(-11, 17)]


@dataclass(frozen=True)
class IsolatedRoot:
    box: tuple[tuple[Fraction, Fraction], ...]  # per-coordinate closed interval
    point: tuple[float, ...]
    nonzero_certified: bool
    jacobian_certified: bool

    @property
    def positive(self) -> bool:
        return all(lo > 0 for lo, _ in self.box) if self.nonzero_certified else all(p > 0 for p in self.point)


@dataclass
class CountResult:
    count: int  # nondegenerate nonzero real solutions
    degenerate: int  # distinct nonzero real solutions that are not simple
    roots: list[IsolatedRoot] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def positive(self) -> int:
        return sum(r.positive for r in self.roots)


@dataclass(frozen=True)
class LaurentCleared:
    polys: tuple[PolyDict, ...]
    shift: tuple[int, ...]  # every equation was multiplied by x^shift


def laurent_to_polynomial(sys: SparseSystem) -> LaurentCleared:
    """Multiply through by the monomial that clears negative exponents.

    Solutions with a zero coordinate may appear and must be excluded later.
    """
    W = sys.support
    shift = tuple(-min(0, min(w[r] for w in W.vectors)) for r in range(W.n))
    polys = []
    for row in sys.coefficients:
        d: PolyDict = {}
        for w, c in zip(W.vectors, row):
            if c:
                d[tuple(a + s for a, s in zip(w, shift))] = Fraction(c)
        polys.append(d)
    return LaurentCleared(tuple(polys), shift)


def _to_coeff_list(d: PolyDict) -> list[Fraction]:
    deg = max(e[0] for e in d)
    out = [Fraction(0)] * (deg + 1)
    for (e,), c in d.items():
        out[e] = c
    return out


def count_real_univariate(coeffs: Sequence) -> CountResult:
    """Nonzero real roots of a univariate polynomial (low-to-high coefficients)."""
    p = uv.normalize(coeffs)
    if not p:
        raise ZeroPolynomial("the zero polynomial has infinitely many roots")
    p = uv._deflate_zero(p)
    if len(p) <= 1:
        return CountResult(0, 0)
    g = uv.gcd(p, uv.derivative(p))
    sf = uv.squarefree_part(p)
    roots, degenerate = [], 0
    for iv in uv.isolate_real_roots(sf, exclude_zero=True):
        if len(g) > 1 and _root_of(g, sf, iv):
            degenerate += 1
            continue
        tight = uv.refine_root(sf, iv, abs(iv.hi - iv.lo) / 2 ** 40)
        roots.append(IsolatedRoot(((tight.lo, tight.hi),), (uv.root_float(sf, iv),), True, True))
    return CountResult(len(roots), degenerate, roots)


# bivariate -------------------------------------------------------------------
_x, _y = sympy.symbols("x y")


def _sympy_poly(d: PolyDict) -> sympy.Poly:
    expr = sum(sympy.Rational(c.numerator, c.denominator) * _x ** e[0] * _y ** e[1] for e, c in d.items())
    return sympy.Poly(expr, _x, _y, domain="QQ")


def _uni(p: sympy.Poly) -> list[Fraction]:
    """Low-to-high Fraction coefficients of a univariate sympy Poly."""
    coeffs = p.all_coeffs()[::-1]
    return [Fraction(int(c.p), int(c.q)) if hasattr(c, "p") else Fraction(str(c)) for c in coeffs]


def count_real_bivariate(
    f: PolyDict | sympy.Poly, g: PolyDict | sympy.Poly, locate: bool = True, exclude_axes: bool = True
) -> CountResult:
    """Real common zeros of ``f, g`` (off the coordinate axes by default).

    A shear ``X = x + lam*y`` makes the leading coefficients in ``y``
    constant, so the resultant ``R(X)`` has no spurious roots. When ``R`` is
    squarefree each real root carries exactly one solution, of intersection
    multiplicity one (hence nondegenerate). Axis solutions are removed exactly
    through ``gcd(R, A(X/lam) B(X))``.
    """
    F0 = f if isinstance(f, sympy.Poly) else _sympy_poly(f)
    G0 = g if isinstance(g, sympy.Poly) else _sympy_poly(g)
    if F0.is_zero or G0.is_zero:
        raise PositiveDimensional("an equation is identically zero")
    t = sympy.Symbol("t")
    A = sympy.gcd(sympy.Poly(F0.as_expr().subs({_x: 0, _y: t}), t, domain="QQ"),
                  sympy.Poly(G0.as_expr().subs({_x: 0, _y: t}), t, domain="QQ"))
    Bp = sympy.gcd(sympy.Poly(F0.as_expr().subs({_y: 0, _x: t}), t, domain="QQ"),
                   sympy.Poly(G0.as_expr().subs({_y: 0, _x: t}), t, domain="QQ"))
    if A.is_zero or Bp.is_zero:
        raise PositiveDimensional("a coordinate axis is a common component")
    if not exclude_axes:
        A = sympy.Poly(1, t, domain="QQ")
        Bp = sympy.Poly(1, t, domain="QQ")
    best: CountResult | None = None
    for lam in _SHEARS:
        res = _count_with_shear(F0, G0, A, Bp, lam, t, locate)
        if res is None:
            continue
        if best is None or res.degenerate < best.degenerate:
            best = res
        if res.degenerate == 0:
            break
    if best is None:
        raise PositiveDimensional("no admissible shear found")
    return best


def _count_with_shear(F0, G0, A, Bp, lam: Fraction, t, locate: bool) -> CountResult | None:
    X = sympy.Symbol("X")
    L = sympy.Rational(lam.numerator, lam.denominator)
    sub = {_x: X - L * _y}
    F = sympy.Poly(F0.as_expr().subs(sub, simultaneous=True), X, _y, domain="QQ")
    G = sympy.Poly(G0.as_expr().subs(sub, simultaneous=True), X, _y, domain="QQ")
    # leading coefficients in y must be nonzero constants
    if F.degree(_y) != F0.total_degree() or G.degree(_y) != G0.total_degree():
        return None
    R = sympy.Poly(sympy.resultant(F.as_expr(), G.as_expr(), _y), X, domain="QQ")
    if R.is_zero:
        raise PositiveDimensional("resultant vanishes identically: common component")
    if R.degree() <= 0:
        return CountResult(0, 0, notes=[f"shear {lam}: constant resultant"])
    r = _uni(R)
    axis = sympy.Poly(A.as_expr().subs(t, X / L), X, domain="QQ") * sympy.Poly(Bp.as_expr().subs(t, X), X, domain="QQ")
    sf = uv.squarefree_part(uv.normalize(r))
    g_axis = uv.gcd(sf, uv.normalize(_uni(axis))) if axis.degree() > 0 else [1]
    mult = uv.gcd(uv.normalize(r), uv.derivative(uv.normalize(r)))
    roots: list[IsolatedRoot] = []
    degenerate = 0
    for iv in uv.isolate_real_roots(sf):
        if len(g_axis) > 1 and _root_of(g_axis, sf, iv):
            continue
        if len(mult) > 1 and _root_of(mult, sf, iv):
            degenerate += 1
            continue
        if locate:
            roots.append(_locate(F0, G0, F, G, sf, iv, lam))
        else:
            roots.append(IsolatedRoot(((iv.lo, iv.hi), (Fraction(0), Fraction(0))), (float(iv.mid), 0.0), False, False))
    return CountResult(len(roots), degenerate, roots, notes=[f"shear {lam}"])


def _root_of(h, sf, iv: uv.RootInterval) -> bool:
    """Is the root of ``sf`` isolated by ``iv`` also a root of ``h``?"""
    if iv.lo == iv.hi:
        return uv.evaluate(uv.normalize(h), uv.to_mpq(iv.lo)) == 0
    common = uv.gcd(sf, uv.normalize(h))
    if len(common) <= 1:
        return False
    return uv.count_real_roots(common, uv.to_mpq(iv.lo), uv.to_mpq(iv.hi)) > 0


def _locate(F0, G0, F, G, sf, iv, lam: Fraction) -> IsolatedRoot:
    """Approximate the solution over a resultant root and try to certify it."""
    tight = uv.refine_root(sf, iv, Fraction(1, 10 ** 45))
    with mpmath.workdps(60):
        Xs = mpmath.mpf(tight.mid.numerator) / tight.mid.denominator
        fy = [mpmath.mpf(int(c.p)) / int(c.q) for c in sympy.Poly(F.as_expr().subs(sympy.Symbol("X"), sympy.Rational(tight.mid.numerator, tight.mid.denominator)), _y).all_coeffs()]
        gexpr = G.as_expr()
        best = None
        for yr in mpmath.polyroots(fy, maxsteps=200, extraprec=200):
            if abs(mpmath.im(yr)) > mpmath.mpf(10) ** -20:
                continue
            yv = mpmath.re(yr)
            val = abs(_mp_eval(gexpr, {sympy.Symbol("X"): Xs, _y: yv}))
            if best is None or val < best[0]:
                best = (val, yv)
        if best is None:
            mid = float(tight.mid)
            return IsolatedRoot(((tight.lo, tight.hi), (Fraction(0), Fraction(0))), (mid, float("nan")), False, False)
        yv = best[1]
        xv = Xs - mpmath.mpf(lam.numerator) / lam.denominator * yv
        rad = mpmath.mpf(10) ** -25
        box = tuple((_frac(v - rad), _frac(v + rad)) for v in (xv, yv))
    nonzero = all(lo > 0 or hi < 0 for lo, hi in box)
    jac_ok = _jacobian_certified(F0, G0, box)
    return IsolatedRoot(box, (float(xv), float(yv)), nonzero, jac_ok)


def _frac(v) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(v)._mpf_
    return (-1) ** sign * Fraction(int(man)) * Fraction(2) ** int(exp)


def _mp_eval(expr, subs):
    return sympy.lambdify(list(subs.keys()), expr, modules="mpmath")(*subs.values())


def _jacobian_certified(F0, G0, box) -> bool:
    """Interval evaluation of the Jacobian determinant over ``box``."""
    det = F0.diff(_x) * G0.diff(_y) - F0.diff(_y) * G0.diff(_x)
    if det.is_zero:
        return False
    old = mpmath.iv.prec
    mpmath.iv.prec = 256
    try:
        with mpmath.workprec(256):
            X, Y = (mpmath.iv.mpf([_mpf(lo), _mpf(hi)]) for lo, hi in box)
            val = mpmath.iv.mpf(0)
            for (a, b), c in det.terms():
                coef = mpmath.iv.mpf(int(c.p)) / int(c.q)
                val += coef * X ** a * Y ** b
    finally:
        mpmath.iv.prec = old
    return not (val.a <= 0 <= val.b)


def _mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


# top level ---------------------------------------------------------------------
@dataclass
class OracleReport:
    count: int
    degenerate: int
    positive: int
    roots: list[IsolatedRoot]
    kouchnirenko: int | None
    parity: str

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "degenerate_suspect": self.degenerate,
            "positive": self.positive,
            "kouchnirenko": self.kouchnirenko,
            "parity": self.parity,
            "roots": [list(r.point) for r in self.roots],
        }


def oracle_count(sys: SparseSystem, locate: bool = True) -> OracleReport:
    n = sys.n
    if n > 2:
        raise UnsupportedDimension("the exact oracle handles n <= 2")
    cleared = laurent_to_polynomial(sys)
    if n == 1:
        res = count_real_univariate(_to_coeff_list(cleared.polys[0]))
    else:
        res = count_real_bivariate(cleared.polys[0], cleared.polys[1], locate=locate)
    W = sys.support
    kb = kouchnirenko_bound(W)
    assert res.count <= kb, f"oracle count {res.count} exceeds Kouchnirenko bound {kb}"
    parity = span_index_parity(W)
    if parity.odd:
        assert res.count <= new_bound(n, W.k).strict_int
    return OracleReport(res.count, res.degenerate, res.positive if (n == 1 or locate) else -1, res.roots, kb, str(parity))
