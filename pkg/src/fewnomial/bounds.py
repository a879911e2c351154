"""Fewnomial bounds and the Khovanskii-Rolle ledger.

Real-valued bounds are evaluated with mpmath at 40 digits so the strict
integer companions (largest integer strictly below the value) are exact even
when the value is huge. Purely integral quantities use Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import mpmath

_DPS = 40


def _e_power(p: int) -> mpmath.mpf:
    with mpmath.workdps(_DPS):
        return mpmath.exp(p)


E2 = _e_power(2)
E4 = _e_power(4)
RATIO = (E4 + 3) / (E2 + 3)


@dataclass(frozen=True)
class Bound:
    """A real bound and the largest integer strictly below it."""

    value: mpmath.mpf
    strict_int: int

    def __float__(self) -> float:
        return float(self.value)


def _strict(value: mpmath.mpf) -> Bound:
    with mpmath.workdps(_DPS):
        c = int(mpmath.ceil(value))
    return Bound(value, c - 1)


def _scale(n: int, k: int) -> int:
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return 2 ** comb(k, 2) * n ** k


def new_bound(n: int, k: int) -> Bound:
    """``(e^4 + 3)/4 * 2^C(k,2) * n^k`` for nondegenerate nonzero real solutions."""
    with mpmath.workdps(_DPS):
        return _strict((E4 + 3) / 4 * _scale(n, k))


def positive_bound(n: int, k: int) -> Bound:
    """``(e^2 + 3)/4 * 2^C(k,2) * n^k`` for positive solutions."""
    with mpmath.workdps(_DPS):
        return _strict((E2 + 3) / 4 * _scale(n, k))


def khovanskii_bound(n: int, k: int) -> int:
    return 2 ** comb(n + k, 2) * (n + 1) ** (n + k)


def sharp_small_bounds(n: int) -> tuple[int, int]:
    """Sharp bounds for ``k = 1``: (nonzero, positive) = (2n+1, n+1)."""
    return 2 * n + 1, n + 1


def gamma_term(n: int, k: int) -> int:
    """Bezout-type bound on ``|V(Gamma_1, ..., Gamma_k)|``."""
    return _scale(n, k)


def flat_face_term(n: int, k: int, j: int) -> Fraction:
    """Face-count bound on the unbounded components of ``C_j``."""
    return Fraction(2 ** comb(k - j, 2) * n ** (k - j) * comb(n + k + 1, j) * 2 ** j, 2)


def flat_series_term(n: int, k: int, j: int) -> Fraction:
    """The weaker bound ``1/2 * 2^C(k,2) n^k * 2^(2j-1)/j!`` used in the summation."""
    return Fraction(_scale(n, k) * 2 ** (2 * j - 1), 2 * factorial(j))


def series_bound(n: int, k: int) -> Fraction:
    """``2^C(k,2) n^k (1 + 1/4 sum_{j=1}^k 4^j/j!)``, exactly."""
    s = sum(Fraction(4 ** j, factorial(j)) for j in range(1, k + 1))
    return _scale(n, k) * (1 + s / 4)


@dataclass(frozen=True)
class KRLedger:
    n: int
    k: int
    gamma_term: int
    face_terms: tuple[Fraction, ...]  # index j-1 holds the bound for C_j
    series_terms: tuple[Fraction, ...]
    flat_terms: tuple[Fraction, ...]  # elementwise min of the two above
    total: Fraction
    face_total: Fraction
    series: Fraction
    new_bound: mpmath.mpf

    def to_dict(self) -> dict:
        return {
            "gamma_term": self.gamma_term,
            "face_terms": [str(f) for f in self.face_terms],
            "series_terms": [str(f) for f in self.series_terms],
            "flat_terms": [str(f) for f in self.flat_terms],
            "total": str(self.total),
            "face_total": str(self.face_total),
            "series": str(self.series),
            "new_bound": float(self.new_bound),
        }


def kr_ledger(n: int, k: int) -> KRLedger:
    """Assemble the Khovanskii-Rolle estimate term by term.

    The face-count bound is not always below the series bound (it is larger
    for small n or k), so each flat term is the smaller of the two; that is
    what makes ``total <= series`` hold on every grid point.
    """
    if n < 1 or k < 1:
        raise ValueError("the ledger needs n >= 1 and k >= 1")
    gamma = gamma_term(n, k)
    js = range(1, k + 1)
    face = tuple(flat_face_term(n, k, j) for j in js)
    ser = tuple(flat_series_term(n, k, j) for j in js)
    flats = tuple(map(min, face, ser))
    total = gamma + sum(flats)
    series = series_bound(n, k)
    nb = new_bound(n, k).value
    assert total <= series
    with mpmath.workdps(_DPS):
        assert mpmath.mpf(series.numerator) / series.denominator < nb
    return KRLedger(n, k, gamma, face, ser, flats, total, gamma + sum(face), series, nb)


@dataclass
class BoundReport:
    n: int
    k: int
    new_bound: Bound
    positive_bound: Bound
    khovanskii_bound: int
    sharp: tuple[int, int] | None
    ledger: KRLedger | None
    kouchnirenko: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "new_bound": float(self.new_bound),
            "new_bound_int": self.new_bound.strict_int,
            "positive_bound": float(self.positive_bound),
            "positive_bound_int": self.positive_bound.strict_int,
            "khovanskii_bound": self.khovanskii_bound,
        }
        if self.sharp is not None:
            out["sharp_nonzero"], out["sharp_positive"] = self.sharp
        if self.ledger is not None:
            out["ledger"] = self.ledger.to_dict()
        if self.kouchnirenko is not None:
            out["kouchnirenko"] = self.kouchnirenko
        out.update(self.extra)
        return out


def bound_report(n: int, k: int) -> BoundReport:
    return BoundReport(
        n=n,
        k=k,
        new_bound=new_bound(n, k),
        positive_bound=positive_bound(n, k),
        khovanskii_bound=khovanskii_bound(n, k),
        sharp=sharp_small_bounds(n) if k == 1 else None,
        ledger=kr_ledger(n, k) if k >= 1 else None,
    )
