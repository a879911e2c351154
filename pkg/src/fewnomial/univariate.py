"""Exact univariate real-root counting and isolation (Sturm sequences).

Polynomials are low-to-high coefficient lists. Arithmetic runs on
``gmpy2.mpq`` internally; inputs may be ints or ``Fraction`` and all
interval endpoints handed back are ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpq

from .errors import ZeroPolynomial

_ZERO = mpq(0)


def to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def to_fraction(x) -> Fraction:
    x = mpq(x)
    return Fraction(int(x.numerator), int(x.denominator))


def trim(c: Sequence) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def normalize(c: Sequence) -> list[mpq]:
    return trim(to_mpq(v) for v in c)


def evaluate(c: Sequence, x):
    acc = _ZERO
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def derivative(c: Sequence) -> list:
    return [i * c[i] for i in range(1, len(c))]


def divmod_poly(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = list(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [_ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
        a.pop()
        a = trim(a)
    return q, a


def monic(c: Sequence) -> list:
    c = trim(c)
    return [v / c[-1] for v in c] if c else c


def gcd(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def squarefree_part(c: Sequence) -> list:
    c = trim(c)
    if len(c) <= 2:
        return c
    g = gcd(c, derivative(c))
    if len(g) <= 1:
        return c
    q, r = divmod_poly(c, g)
    assert not r
    return q


def sturm_sequence(c: Sequence) -> list[list]:
    c = trim(c)
    seq = [c, derivative(c)]
    while True:
        _, r = divmod_poly(seq[-2], seq[-1])
        if not r:
            break
        scale = abs(r[-1])
        seq.append([-v / scale for v in r])
    return [s for s in seq if s]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_variations(values) -> int:
    signs = [s for s in (_sign(v) for v in values) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def variations_at(seq: list[list], x) -> int:
    if x == gmpy2.inf():
        return sign_variations(s[-1] for s in seq)
    if x == -gmpy2.inf():
        return sign_variations(s[-1] * (-1) ** (len(s) - 1) for s in seq)
    return sign_variations(evaluate(s, x) for s in seq)


INF = gmpy2.inf()


def count_roots(seq: list[list], a, b) -> int:
    """Distinct real roots in ``(a, b]`` (Sturm's theorem)."""
    return variations_at(seq, a) - variations_at(seq, b)


def cauchy_bound(c: Sequence) -> mpq:
    c = trim(c)
    lead = abs(c[-1])
    return 1 + max((abs(v) / lead for v in c[:-1]), default=_ZERO)


@dataclass(frozen=True)
class RootInterval:
    """An isolating interval. ``lo == hi`` marks an exactly rational root."""

    lo: Fraction
    hi: Fraction

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def width(self) -> Fraction:
        return self.hi - self.lo


def isolate_real_roots(c: Sequence, *, exclude_zero: bool = False) -> list[RootInterval]:
    """Disjoint isolating intervals for the distinct real roots of ``c``.

    Intervals are open, have non-root endpoints and never contain 0, so every
    one carries a sign change of the squarefree part. A root at 0 is reported
    as the degenerate interval ``[0, 0]`` unless ``exclude_zero`` is set.
    """
    p = normalize(c)
    if not p:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    p = squarefree_part(p)
    zero_root = p[0] == 0
    if zero_root:
        p = p[1:]
    out: list[RootInterval] = []
    if zero_root and not exclude_zero:
        out.append(RootInterval(Fraction(0), Fraction(0)))
    if len(p) <= 1:
        return out
    seq = sturm_sequence(p)
    bound = cauchy_bound(p)
    stack = [(-bound, _ZERO), (_ZERO, bound)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append(RootInterval(to_fraction(lo), to_fraction(hi)))
            continue
        cut = _split_point(p, lo, hi)
        stack.append((lo, cut))
        stack.append((cut, hi))
    out.sort(key=lambda r: r.lo)
    return out


_SPLITS = [mpq(1, 2), mpq(1, 3), mpq(2, 3), mpq(2, 5), mpq(3, 5), mpq(3, 7), mpq(4, 7)]


def _split_point(p, lo, hi):
    # any non-root strictly inside works; finitely many roots means one of these does
    for t in _SPLITS:
        x = lo + (hi - lo) * t
        if evaluate(p, x) != 0:
            return x
    raise AssertionError("no non-root split point found")


def _deflate_zero(p: list) -> list:
    while p and p[0] == 0:
        p = p[1:]
    return p


def refine_root(c: Sequence, iv: RootInterval, width) -> RootInterval:
    """Bisect an interval from :func:`isolate_real_roots` below ``width``."""
    if iv.lo == iv.hi:
        return iv
    p = _deflate_zero(squarefree_part(normalize(c)))
    lo, hi = to_mpq(iv.lo), to_mpq(iv.hi)
    slo = _sign(evaluate(p, lo))
    width = to_mpq(width)
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = _sign(evaluate(p, mid))
        if sm == 0:
            return RootInterval(to_fraction(mid), to_fraction(mid))
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return RootInterval(to_fraction(lo), to_fraction(hi))


def root_float(c: Sequence, iv: RootInterval) -> float:
    """Nearest double to the root in ``iv``."""
    if iv.lo == iv.hi:
        return float(iv.lo)
    scale = max(abs(iv.lo), abs(iv.hi), Fraction(1, 10 ** 300))
    tight = refine_root(c, iv, scale * Fraction(1, 2 ** 60))
    return float(tight.mid)


def count_real_roots(c: Sequence, a=-INF, b=INF) -> int:
    """Distinct real roots of ``c`` in ``(a, b]``."""
    p = normalize(c)
    if not p:
        raise ZeroPolynomial("the zero polynomial has infinitely many roots")
    p = squarefree_part(p)
    if len(p) <= 1:
        return 0
    return count_roots(sturm_sequence(p), a, b)


def count_nonzero_real_roots(c: Sequence) -> tuple[int, int]:
    """Return ``(simple, multiple)`` counts of distinct nonzero real roots."""
    p = normalize(c)
    if not p:
        raise ZeroPolynomial("the zero polynomial has infinitely many roots")
    while p and p[0] == 0:
        p = p[1:]
    if len(p) <= 1:
        return 0, 0
    dp = derivative(p)
    g = gcd(p, dp)
    total = _nonzero_count(squarefree_part(p))
    if len(g) <= 1:
        return total, 0
    multiple = _nonzero_count(squarefree_part(g))
    return total - multiple, multiple


def _nonzero_count(p) -> int:
    # p has p(0) != 0
    if len(p) <= 1:
        return 0
    seq = sturm_sequence(p)
    return variations_at(seq, -INF) - variations_at(seq, INF)
