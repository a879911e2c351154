"""JSON instance files and seeded random instance generation."""

from __future__ import annotations

import json
import random
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Any

from .errors import InstanceFormatError, SamplingExhausted
from .gale import SparseSystem
from .lattice import normalize_support, span_index_parity

MAX_TRIES = 10_000


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s: Any) -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if not isinstance(s, str):
        raise InstanceFormatError(f"coefficients must be 'p/q' strings, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceFormatError(f"bad rational {s!r}") from exc


def to_dict(sys: SparseSystem, meta: dict | None = None) -> dict:
    """Instance as plain JSON data; exponents are the original (untranslated) vectors."""
    W = sys.support
    exps = [[a + t for a, t in zip(v, W.translation)] for v in W.vectors]
    out: dict[str, Any] = {
        "n": W.n,
        "k": W.k,
        "exponents": exps,
        "coefficients": [[fraction_str(c) for c in row] for row in sys.coefficients],
    }
    if meta:
        out["meta"] = meta
    return out


def from_dict(data: dict) -> SparseSystem:
    try:
        n, k = int(data["n"]), int(data["k"])
        exps = [[int(a) for a in v] for v in data["exponents"]]
        coeffs = [[parse_fraction(c) for c in row] for row in data["coefficients"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceFormatError):
            raise
        raise InstanceFormatError(f"malformed instance: {exc}") from exc
    if len(exps) != n + k + 1 or any(len(v) != n for v in exps):
        raise InstanceFormatError(f"expected {n + k + 1} exponent vectors of length {n}")
    try:
        return SparseSystem.from_data(exps, coeffs)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc


def dumps(sys: SparseSystem, meta: dict | None = None) -> str:
    return json.dumps(to_dict(sys, meta), indent=2) + "\n"


def loads(text: str) -> SparseSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not JSON: {exc}") from exc
    return from_dict(data)


def read_instance(path: str | Path) -> SparseSystem:
    return loads(Path(path).read_text())


def write_instance(path: str | Path, sys: SparseSystem, meta: dict | None = None) -> None:
    Path(path).write_text(dumps(sys, meta))


def _coef(rng: random.Random, coef_range: int, denom: int = 100) -> Fraction:
    while True:
        c = Fraction(rng.randint(-coef_range * denom, coef_range * denom), denom)
        if c:
            return c


def random_instance(
    n: int,
    k: int,
    seed: int,
    exp_range: int = 5,
    coef_range: int = 10,
    require_odd: bool = True,
    exp_step: int = 1,
) -> SparseSystem:
    """Rejection-sample a support in ``[0, exp_range]^n`` and uniform rational coefficients.

    The first vector is always the origin and exponents are multiples of
    ``exp_step``. Deterministic for a given seed.
    """
    if n < 1 or k < 0 or exp_range < 1 or coef_range < 1:
        raise ValueError("n, exp_range and coef_range must be positive and k >= 0")
    rng = random.Random(seed)
    for _ in range(MAX_TRIES):
        pts = {tuple([0] * n)}
        while len(pts) < n + k + 1:
            if len(pts) >= (exp_range // exp_step + 1) ** n:
                raise SamplingExhausted("exponent box too small for the requested support size")
            pts.add(tuple(exp_step * rng.randint(0, exp_range // exp_step) for _ in range(n)))
        vecs = [list(p) for p in sorted(pts)]
        parity = span_index_parity(normalize_support(vecs))
        if parity.rank_deficient or (require_odd and not parity.odd):
            continue
        coeffs = [[_coef(rng, coef_range) for _ in vecs] for _ in range(n)]
        try:
            return SparseSystem.from_data(vecs, coeffs)
        except ValueError:
            continue
    raise SamplingExhausted(f"no admissible support after {MAX_TRIES} tries")


def random_trinomial(rng: random.Random, max_exp: int = 20, coef_range: int = 10) -> SparseSystem:
    """``c0 + c1 x^a + c2 x^b`` with ``1 <= a < b <= max_exp`` and ``gcd(a, b)`` odd."""
    while True:
        a, b = sorted(rng.sample(range(1, max_exp + 1), 2))
        if gcd(a, b) % 2:
            break
    coeffs = [[_coef(rng, coef_range) for _ in range(3)]]
    return SparseSystem.from_data([[0], [a], [b]], coeffs)
