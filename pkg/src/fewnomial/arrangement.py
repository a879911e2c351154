"""The hyperplane arrangement of the forms p_i and its projective closure.

Everything is homogeneous: a form ``a0 + a.y`` becomes the row vector
``(a0, a)`` acting on ``Y = (Y0, Y1, ..., Yk)`` and the hyperplane at
infinity is ``(1, 0, ..., 0)``. All predicates are exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from . import exact
from .errors import GenericityViolation, UnsupportedK

INFINITY = -1  # label of the hyperplane at infinity in face index tuples


@dataclass(frozen=True)
class FaceCodimJ:
    """Intersection of ``j`` hyperplanes of A+.

    ``hyperplanes`` holds form indices, with :data:`INFINITY` for the
    hyperplane at infinity; ``point`` is a homogeneous representative.
    """

    hyperplanes: tuple[int, ...]
    point: tuple[Fraction, ...]

    @property
    def j(self) -> int:
        return len(self.hyperplanes)

    @property
    def at_infinity(self) -> bool:
        return self.point[0] == 0

    def affine_point(self) -> tuple[Fraction, ...] | None:
        if self.at_infinity:
            return None
        return tuple(c / self.point[0] for c in self.point[1:])


@dataclass(frozen=True)
class Chamber:
    signs: tuple[int, ...]  # sign of every form (constant forms included)
    sample: tuple[Fraction, ...]
    bounded: bool


class Arrangement:
    def __init__(self, forms: Sequence[Sequence], include_infinity: bool = True):
        self.forms = tuple(tuple(exact.as_fraction(a) for a in f) for f in forms)
        self.k = len(self.forms[0]) - 1
        self.include_infinity = include_infinity
        self.hyper_index = [i for i, f in enumerate(self.forms) if any(a != 0 for a in f[1:])]
        if exact.rank([f[1:] for f in self.forms]) < self.k:
            raise ValueError("arrangement is not essential: linear parts do not span R^k")

    @classmethod
    def from_gale(cls, gd, include_infinity: bool = True) -> "Arrangement":
        return cls(gd.forms, include_infinity)

    @property
    def m(self) -> int:
        return len(self.hyper_index)

    def labels(self) -> list[int]:
        out = list(self.hyper_index)
        if self.include_infinity:
            out.append(INFINITY)
        return out

    def normal(self, label: int) -> tuple[Fraction, ...]:
        if label == INFINITY:
            return (Fraction(1),) + (Fraction(0),) * self.k
        return self.forms[label]

    # genericity ---------------------------------------------------------------
    def genericity_check(self) -> list[str]:
        """Violations of 'every j hyperplanes meet in codimension j' (empty if generic)."""
        issues = []
        for i, f in enumerate(self.forms):
            if i not in self.hyper_index:
                issues.append(f"p_{i + 1} is constant, so it coincides with the hyperplane at infinity")
        labels = self.labels()
        for size in range(2, self.k + 2):
            for sub in itertools.combinations(labels, size):
                if exact.rank([self.normal(l) for l in sub]) < size:
                    names = ", ".join(_name(l) for l in sub)
                    if size == 2:
                        issues.append(f"{names} coincide")
                    elif INFINITY in sub and self.k == 2:
                        issues.append(f"{names} are concurrent (parallel lines meet only at infinity)")
                    else:
                        issues.append(f"{names} are concurrent")
        return issues

    def is_generic(self) -> bool:
        return not self.genericity_check()

    def _require_generic(self):
        if self.k > 2:
            raise UnsupportedK("geometric arrangement routines need k <= 2")
        issues = self.genericity_check()
        if issues:
            raise GenericityViolation("; ".join(issues))

    # faces -------------------------------------------------------------------
    def enumerate_faces(self, j: int) -> list[FaceCodimJ]:
        self._require_generic()
        if not 0 <= j <= self.k:
            raise ValueError("need 0 <= j <= k")
        out = []
        for sub in itertools.combinations(self.labels(), j):
            out.append(FaceCodimJ(tuple(sub), self._face_point(sub)))
        return out

    def _face_point(self, sub: Sequence[int]) -> tuple[Fraction, ...]:
        """A point of the face avoiding every other hyperplane."""
        rows = [self.normal(l) for l in sub]
        others = [self.normal(l) for l in self.labels() if l not in sub]
        basis = exact.nullspace(rows, self.k + 1) if rows else [
            [Fraction(int(i == c)) for i in range(self.k + 1)] for c in range(self.k + 1)
        ]
        # try small integer combinations of the basis until no other form vanishes
        for coeffs in _small_vectors(len(basis)):
            pt = [sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(self.k + 1)]
            if any(pt) and all(_dot(o, pt) != 0 for o in others):
                return _primitive(pt)
        raise GenericityViolation("could not find a generic point on a face")

    def incident_chambers(self, face: FaceCodimJ) -> list[Chamber]:
        """The 2^j chambers whose closures contain ``face`` (one per local sign pattern)."""
        self._require_generic()
        return [self._chamber_of(self._witness(face, s)) for s in itertools.product((1, -1), repeat=face.j)]

    def _witness(self, face: FaceCodimJ, signs: Sequence[int]) -> tuple[Fraction, ...]:
        rows = [list(self.normal(l)) for l in face.hyperplanes]
        rhs = [Fraction(s) for s in signs]
        # complete to a square system with rows orthogonal to the face point
        extra = [list(face.point)]
        for e in range(self.k + 1):
            if len(rows) + len(extra) == self.k + 1:
                break
            cand = [Fraction(int(i == e)) for i in range(self.k + 1)]
            if exact.rank(rows + extra + [cand]) == len(rows) + len(extra) + 1:
                extra.append(cand)
        w = exact.solve(rows + extra, rhs + [Fraction(0)] * len(extra))
        eps = Fraction(1)
        for l in self.labels():
            if l in face.hyperplanes:
                continue
            h = self.normal(l)
            hw = _dot(h, w)
            if hw:
                eps = min(eps, abs(_dot(h, face.point)) / (2 * abs(hw)))
        return tuple(p + eps * wi for p, wi in zip(face.point, w))

    def sign_vector(self, y: Sequence) -> tuple[int, ...]:
        vals = [f[0] + sum(a * yi for a, yi in zip(f[1:], y)) for f in self.forms]
        return tuple((v > 0) - (v < 0) for v in vals)

    def _chamber_of(self, Y: Sequence[Fraction]) -> Chamber:
        y = tuple(c / Y[0] for c in Y[1:])
        return self._chamber_table()[self.sign_vector(y)]

    # chambers ------------------------------------------------------------------
    def chambers(self) -> list[Chamber]:
        self._require_generic()
        return sorted(self._chamber_table().values(), key=lambda c: c.signs)

    def _chamber_table(self) -> dict[tuple[int, ...], Chamber]:
        cached = getattr(self, "_table", None)
        if cached is not None:
            return cached
        witnesses: dict[tuple[int, ...], list[tuple[tuple[Fraction, ...], bool]]] = {}
        for face in self._top_faces():
            for s in itertools.product((1, -1), repeat=face.j):
                Y = self._witness(face, s)
                y = tuple(c / Y[0] for c in Y[1:])
                witnesses.setdefault(self.sign_vector(y), []).append((y, face.at_infinity))
        if not witnesses:
            # fewer hyperplanes than faces need: a single chamber
            y = tuple(Fraction(0) for _ in range(self.k))
            witnesses[self.sign_vector(y)] = [(y, False)]
        table = {}
        for signs, pts in witnesses.items():
            finite = [p for p, inf in pts if not inf] or [p for p, _ in pts]
            sample = tuple(sum(c) / len(finite) for c in zip(*finite))
            assert self.sign_vector(sample) == signs
            bounded = all(not inf for _, inf in pts)
            table[signs] = Chamber(signs, sample, bounded)
        self._table = table
        return table

    def _top_faces(self) -> list[FaceCodimJ]:
        labels = self.labels()
        faces = []
        for sub in itertools.combinations(labels, self.k):
            faces.append(FaceCodimJ(tuple(sub), self._face_point(sub)))
        return faces


def face_count(n: int, k: int, j: int) -> int:
    """Number of codimension-j faces of a generic A+ with n+k affine hyperplanes."""
    if not 0 <= j <= k:
        raise ValueError("need 0 <= j <= k")
    return comb(n + k + 1, j)


def generic_chamber_count(m: int, k: int) -> int:
    """Chambers cut out of R^k by m generic affine hyperplanes."""
    return sum(comb(m, i) for i in range(k + 1))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _primitive(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    scale = max(abs(c) for c in v)
    return tuple(c / scale for c in v)


def _small_vectors(dim: int):
    if dim == 0:
        yield ()
        return
    for r in range(1, 6):
        for v in itertools.product(range(-r, r + 1), repeat=dim):
            if max(map(abs, v)) == r:
                yield v


def _name(label: int) -> str:
    return "infinity" if label == INFINITY else f"p_{label + 1}"
