"""Khovanskii-Rolle counting of the solutions of a master system (k <= 2).

For k = 1 every chamber is an interval on which psi_1 is monotone between
consecutive zeros of Gamma_1, so each monotone piece carries a zero exactly
when psi_1 changes sign across it.

For k = 2 the solver follows the proof of the estimate

    |V(psi_1, psi_2)| <= flat(C_2) + flat(C_1) + |V(Gamma_1, Gamma_2)|

phase A  solves Gamma_1 = Gamma_2 = 0 exactly (resultants),
phase B  traces C_1 = V(Gamma_2) and collects V(psi_1, Gamma_2),
phase C  traces C_2 = V(psi_1) and collects V(psi_1, psi_2).

Curves are traced on projective charts in logarithmic coordinates
``s = log|P_a/P_c|, t = log|P_b/P_c|`` where ``a, b`` are the two hyperplanes
of A+ closest to the current point. Faces of A+ then sit at ``s`` or ``t``
equal to minus infinity, which keeps full relative precision near vertices
and lines and treats the hyperplane at infinity like any other.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import exact
from . import univariate as uv
from .arrangement import INFINITY, Arrangement
from .bounds import flat_face_term, gamma_term
from .errors import (
    DegenerateIntersection,
    EvenIndex,
    FaceDegeneracy,
    GenericityViolation,
    PositiveDimensional,
    RankDeficient,
    StepCollapse,
    UnsupportedK,
)
from .gale import GaleDual, SparseSystem, build_gale_dual, lift_to_torus
from .lattice import span_index_parity
from .master import GammaChain, MasterSystem, build_gamma_chain, generic_basis
from .poly import Poly

log = logging.getLogger(__name__)

VERIFIED = "VERIFIED"
UNVERIFIED = "UNVERIFIED"


@dataclass
class SolveOptions:
    seed: int = 0
    perturb: str = "auto"  # "auto": only when genericity fails, "always", or "never"
    perturb_rel: float = 1e-6
    retries: int = 3
    degen_tol: float = 1e-8
    residual_tol: float = 1e-10
    min_step: float = 1e-12
    max_steps: int = 100_000
    max_step: float = 0.5
    extremum_step: float = 1e-4  # steps across a turning point of the monitor are cut to this
    seed_depth: float = 16.0  # seeds sit at log-distance -seed_depth from their face
    keep_samples: bool = False


@dataclass
class Solution:
    y: tuple[float, ...]
    log_abs_p: tuple[float, ...]  # log|p_i(y)|, precise even very close to A
    signs: tuple[int, ...]
    residual: float
    sigma_min: float
    x: tuple | None = None
    sparse_residual: float | None = None

    def z(self) -> tuple[float, ...]:
        return tuple(s * math.exp(l) for s, l in zip(self.signs, self.log_abs_p))


@dataclass
class CurveTrace:
    j: int
    arcs: list[list[tuple[float, ...]]] = field(default_factory=list)  # affine polylines
    ends: list[tuple] = field(default_factory=list)  # (start end id, finish end id)
    closed: int = 0
    flat: int = 0
    failures: int = 0


@dataclass
class Ledger:
    gamma_points: int
    flat: list[int]  # flat[j-1] observed for C_j
    intermediate: int | None  # |V(psi_1, Gamma_2)| for k = 2
    flat_bounds: list[Fraction]
    gamma_bound: int

    @property
    def rhs(self) -> int:
        return sum(self.flat) + self.gamma_points

    def violations(self, count: int) -> list[str]:
        out = []
        if count > self.rhs:
            out.append(f"{count} solutions exceed flat + |V(Gamma)| = {self.rhs}")
        if self.intermediate is not None and self.intermediate > self.flat[0] + self.gamma_points:
            out.append("|V(psi_1, Gamma_2)| exceeds flat(C_1) + |V(Gamma)|")
        if count > self.flat[-1] + (self.intermediate if self.intermediate is not None else self.gamma_points):
            out.append("|V(psi)| exceeds flat(C_k) + |V(psi_1, ..., Gamma_k)|")
        if self.gamma_points > self.gamma_bound:
            out.append(f"|V(Gamma)| = {self.gamma_points} exceeds {self.gamma_bound}")
        for j, (f, b) in enumerate(zip(self.flat, self.flat_bounds), start=1):
            if f > b:
                out.append(f"flat(C_{j}) = {f} exceeds the face bound {b}")
        return out

    def to_dict(self) -> dict:
        return {
            "gamma_points": self.gamma_points,
            "flat": self.flat,
            "intermediate": self.intermediate,
            "rhs": self.rhs,
            "flat_bounds": [str(b) for b in self.flat_bounds],
            "gamma_bound": self.gamma_bound,
        }


@dataclass
class SolutionSet:
    status: str
    k: int
    n: int
    solutions: list[Solution]
    degenerate: list[Solution]
    ledger: Ledger | None
    traces: list[CurveTrace] = field(default_factory=list)
    gamma_points: list[tuple[float, ...]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    perturbed: bool = False
    system: SparseSystem | None = None
    # zeros of psi in chambers where prod sign(p_i)^b_ij = -1 for some j: they
    # solve |p|^B = 1 but are not images of real solutions
    off_image: list[Solution] = field(default_factory=list)
    master: MasterSystem | None = None

    @property
    def count(self) -> int:
        return len(self.solutions)

    @property
    def master_count(self) -> int:
        return len(self.solutions) + len(self.off_image)

    def ledger_violations(self) -> list[str]:
        return self.ledger.violations(self.master_count) if self.ledger else []

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "n": self.n,
            "k": self.k,
            "count": self.count,
            "master_count": self.master_count,
            "degenerate_suspect": len(self.degenerate),
            "perturbed": self.perturbed,
            "ledger": self.ledger.to_dict() if self.ledger else None,
            "solutions": [
                {
                    "y": [_r(v) for v in s.y],
                    "x": [_r(float(v)) for v in s.x] if s.x is not None else None,
                    "residual": _r(s.residual),
                    "sigma_min": _r(s.sigma_min),
                    "sparse_residual": _r(s.sparse_residual) if s.sparse_residual is not None else None,
                }
                for s in self.solutions
            ],
            "notes": self.notes,
        }


def _r(v: float) -> float:
    return float(f"{v:.12g}")


def _sign(v) -> int:
    return (v > 0) - (v < 0)


# =============================================================================
# k = 1
# =============================================================================


def _solve_k1(ms: MasterSystem, chain: GammaChain, opts: SolveOptions) -> SolutionSet:
    forms = ms.gd.forms
    w = [row[0] for row in ms.B]
    nonconst = ms.nonconstant()
    roots = sorted({(-f[0] / f[1], i) for i, f in enumerate(forms) if i in nonconst})
    if len({r for r, _ in roots}) < len(roots):
        raise GenericityViolation("two forms vanish at the same point")
    notes: list[str] = []
    # phase A: zeros of Gamma_1, isolated exactly. Forms of weight 0 do not
    # enter psi, so they are left out of the cleared numerator.
    active = [i for i in nonconst if w[i] != 0]
    F0 = sum(
        (_cofactor(forms, active, i) * (w[i] * forms[i][1]) for i in active),
        start=Poly(1),
    )
    f0 = F0.univariate_coeffs() if not F0.is_zero() else []
    if not f0:
        raise GenericityViolation("Gamma_1 vanishes identically")
    gamma_ivs = uv.isolate_real_roots(f0) if len(f0) > 1 else []
    gamma_pts = []
    for iv in gamma_ivs:
        for r, _ in roots:
            if uv.evaluate(uv.normalize(f0), uv.to_mpq(r)) == 0:
                raise FaceDegeneracy("Gamma_1 vanishes on the arrangement")
        gamma_pts.append(_separate(f0, iv, [r for r, _ in roots]))
    S = sum(w[i] for i in nonconst)

    def psi_at(anchor: Fraction, t: float) -> float:
        total = 0.0
        for f, b in zip(forms, w):
            if b:
                total += float(b) * math.log(abs(float(f[0] + f[1] * anchor) + float(f[1]) * t))
        return total

    def dpsi_at(anchor: Fraction, t: float) -> float:
        return sum(float(b) * float(f[1]) / (float(f[0] + f[1] * anchor) + float(f[1]) * t) for f, b in zip(forms, w) if b)

    bounds = [(-math.inf, None)] + [(r, i) for r, i in roots] + [(math.inf, None)]
    solutions: list[Solution] = []
    degenerate: list[Solution] = []
    status = VERIFIED
    for (lo, ilo), (hi, ihi) in zip(bounds, bounds[1:]):
        inside = [g for g in gamma_pts if (lo == -math.inf or g[1] > lo) and (hi == math.inf or g[0] < hi)]
        # piece boundaries: ("end", value, form index) or ("gamma", interval)
        marks: list[tuple] = [("end", lo, ilo)] + [("gamma", g) for g in sorted(inside)] + [("end", hi, ihi)]
        signs = []
        for idx, mk in enumerate(marks):
            if mk[0] == "gamma":
                y = float((mk[1][0] + mk[1][1]) / 2)
                anchor = Fraction(y)
                val = psi_at(anchor, 0.0)
                scale = 1 + sum(abs(float(b) * math.log(abs(float(f[0] + f[1] * anchor)))) for f, b in zip(forms, w) if b)
                if abs(val) < 1e-12 * scale:
                    degenerate.append(_k1_solution(ms, anchor, 0.0, val, dpsi_at(anchor, 0.0)))
                    signs.append(0)
                else:
                    signs.append(_sign(val))
            else:
                signs.append(_k1_end_sign(ms, mk, idx == 0, S))
        for p in range(len(marks) - 1):
            sl, sr = signs[p], signs[p + 1]
            if sl == 0 or sr == 0 or sl == sr:
                continue
            try:
                anchor, t = _k1_root(psi_at, marks[p], marks[p + 1], sl, sr, forms)
            except StepCollapse as exc:
                status = UNVERIFIED
                notes.append(str(exc))
                continue
            sol = _k1_solution(ms, anchor, t, psi_at(anchor, t), dpsi_at(anchor, t))
            (solutions if sol.sigma_min > opts.degen_tol else degenerate).append(sol)
    ledger = Ledger(
        gamma_points=len(gamma_pts),
        flat=[len(bounds) - 1],
        intermediate=None,
        flat_bounds=[flat_face_term(ms.n, 1, 1)],
        gamma_bound=gamma_term(ms.n, 1),
    )
    trace = CurveTrace(1, flat=len(bounds) - 1)
    return SolutionSet(
        status,
        1,
        ms.n,
        solutions,
        degenerate,
        ledger,
        traces=[trace],
        gamma_points=[(float((g[0] + g[1]) / 2),) for g in gamma_pts],
        notes=notes,
    )


def _cofactor(forms, active, i) -> Poly:
    out = Poly.constant(1, Fraction(1))
    for l in active:
        if l != i:
            out = out * Poly.affine(forms[l])
    return out


def _separate(f0, iv: uv.RootInterval, points: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval until it excludes every point of ``points``."""
    while any(iv.lo <= p <= iv.hi for p in points) or iv.hi - iv.lo > Fraction(1, 10 ** 12) * (1 + abs(iv.lo)):
        iv = uv.refine_root(f0, iv, (iv.hi - iv.lo) / 4)
        if iv.lo == iv.hi:
            break
    return iv.lo, iv.hi


def _k1_end_sign(ms: MasterSystem, mark, left: bool, S) -> int:
    _, value, idx = mark
    if idx is None:  # +- infinity
        if S != 0:
            return _sign(S)
        from .master import psi_limit_at_infinity

        lim = psi_limit_at_infinity(ms)
        if abs(lim) < 1e-12:
            raise GenericityViolation("psi_1 tends to 0 at infinity")
        return _sign(lim)
    b = ms.B[idx][0]
    if b != 0:
        return -_sign(b)
    # the form does not enter psi: finite limit
    val = sum(
        float(bb[0]) * math.log(abs(float(f[0] + f[1] * value)))
        for i, (f, bb) in enumerate(zip(ms.gd.forms, ms.B))
        if i != idx and bb[0]
    )
    if abs(val) < 1e-12:
        raise GenericityViolation("psi_1 vanishes on a hyperplane it does not involve")
    return _sign(val)


def _k1_root(psi_at, left, right, sl: int, sr: int, forms):
    """Bracket and solve psi = 0 on one monotone piece. Returns (anchor, offset)."""

    def inner(mark, other, want: int, toward: int):
        if mark[0] == "gamma":
            return Fraction((mark[1][0] + mark[1][1]) / 2), 0.0
        value = mark[1]
        if math.isinf(value):
            # walk outward from the other end until the sign shows
            base = Fraction(0) if other[0] == "end" and math.isinf(other[1]) else _mark_point(other)
            step = 1.0
            for _ in range(2100):
                y = float(base) - toward * step
                if psi_at(Fraction(0), y) * want > 0:
                    return Fraction(0), y
                step *= 2
                if step > 1e300:
                    break
            raise StepCollapse("could not bracket a root near infinity")
        anchor = value
        other_pt = _mark_point(other) if not (other[0] == "end" and math.isinf(other[1])) else anchor + toward
        span = float(abs(other_pt - anchor)) / 2 or 1.0
        t = span
        for _ in range(1100):
            if psi_at(anchor, toward * t) * want > 0:
                return anchor, toward * t
            t /= 2
            if t < 1e-300:
                break
        raise StepCollapse("could not bracket a root near a hyperplane")

    a_anchor, a_t = inner(left, right, sl, +1)
    b_anchor, b_t = inner(right, left, sr, -1)
    # solve in coordinates anchored at the nearer hyperplane end
    use_left = left[0] == "end" and not math.isinf(left[1])
    use_right = right[0] == "end" and not math.isinf(right[1])
    if use_left and (not use_right or abs(a_t) <= abs(b_t)):
        anchor = a_anchor
    elif use_right:
        anchor = b_anchor
    else:
        anchor = Fraction(0)
    ta = float(a_anchor - anchor) + a_t
    tb = float(b_anchor - anchor) + b_t
    t = brentq(lambda v: psi_at(anchor, v), ta, tb, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return anchor, t


def _mark_point(mark) -> Fraction:
    if mark[0] == "gamma":
        return (mark[1][0] + mark[1][1]) / 2
    return mark[1]


def _k1_solution(ms: MasterSystem, anchor: Fraction, t: float, val: float, dval: float) -> Solution:
    logs, signs = [], []
    dist = math.inf
    for f in ms.gd.forms:
        v = float(f[0] + f[1] * anchor) + float(f[1]) * t
        logs.append(math.log(abs(v)) if v else -math.inf)
        signs.append(_sign(v))
        if f[1]:
            dist = min(dist, abs(v / float(f[1])))
    # derivative in the log-distance coordinate of the nearest hyperplane: scale free
    return Solution((float(anchor) + t,), tuple(logs), tuple(signs), abs(val), abs(dval) * dist)


# =============================================================================
# k = 2: projective charts in logarithmic coordinates
# =============================================================================


class Geometry:
    """Homogeneous data of A+ together with the weights of psi_1, psi_2."""

    def __init__(self, ms: MasterSystem, chain: GammaChain):
        self.ms = ms
        forms = ms.gd.forms
        self.affine = ms.nonconstant()
        self.labels = list(self.affine) + [INFINITY]
        self.H = [tuple(forms[i]) for i in self.affine] + [(Fraction(1), Fraction(0), Fraction(0))]
        winf = ms.infinity_weights()
        self.W_exact = [tuple(ms.B[i]) for i in self.affine] + [tuple(winf)]
        self.W = [tuple(float(v) for v in row) for row in self.W_exact]
        self.const = [
            sum(float(ms.B[i][j]) * math.log(abs(float(forms[i][0]))) for i in range(len(forms)) if i not in self.affine)
            for j in range(2)
        ]
        self.norms = [math.sqrt(sum(float(c) ** 2 for c in h)) for h in self.H]
        self.lognorms = [math.log(v) for v in self.norms]
        self.L = len(self.H)
        self.inf_pos = self.L - 1
        self.F = chain.F
        self.F_hom = [_homogenize(f) for f in chain.F]
        self._charts: dict[tuple[int, int, int], Chart] = {}
        self.deg_vertices: set[tuple[int, int]] = set()  # vertices where F_0 vanishes

    def chart(self, a: int, b: int, c: int) -> "Chart":
        key = (a, b, c)
        ch = self._charts.get(key)
        if ch is None:
            ch = Chart(self, a, b, c)
            self._charts[key] = ch
        return ch

    def label_signs(self, affine_signs: Sequence[int]) -> list[int]:
        """sign(P_h / Y0) for every hyperplane label, from affine form signs."""
        return [affine_signs[i] for i in self.affine] + [1]

    def best_chart(self, logd: Sequence[float]) -> tuple[int, int, int]:
        order = sorted(range(self.L), key=lambda h: logd[h])
        a, b = sorted(order[:2])
        return a, b, order[-1]


def _homogenize(p: Poly) -> list[tuple[Fraction, tuple[int, int, int]]]:
    return [(c, e) for c, e in p.homogeneous_terms()]


class Chart:
    """Coordinates ``(u, v) = (P_a/P_c, P_b/P_c)``; the other forms are affine in (u, v)."""

    def __init__(self, geo: Geometry, a: int, b: int, c: int):
        self.geo = geo
        self.key = (a, b, c)
        self.a, self.b, self.c = a, b, c
        N = [list(geo.H[a]), list(geo.H[b]), list(geo.H[c])]
        self.Ninv = exact.inverse(N)
        self.coef_exact = [tuple(sum(h[r] * self.Ninv[r][col] for r in range(3)) for col in range(3)) for h in geo.H]
        self.coef = [tuple(float(v) for v in row) for row in self.coef_exact]
        self.others = [h for h in range(geo.L) if h not in (a, b, c)]
        self.Ninv_f = [[float(v) for v in row] for row in self.Ninv]
        self.F = [self._chart_poly(terms) for terms in geo.F_hom]
        self.Ff = [[(e[0], e[1], float(c)) for e, c in p.terms.items()] for p in self.F]

    def _chart_poly(self, terms) -> Poly:
        Y = [Poly.affine([self.Ninv[r][2], self.Ninv[r][0], self.Ninv[r][1]]) for r in range(3)]
        out = Poly(2)
        for c, (e0, e1, e2) in terms:
            out = out + (Y[0] ** e0) * (Y[1] ** e1) * (Y[2] ** e2) * c
        return out

    # point data -------------------------------------------------------------
    def logs(self, s: float, t: float, sa: int, sb: int) -> tuple[list[float], list[float], float, float]:
        """Values q_h = P_h/P_c and log|q_h| for every label."""
        u = sa * math.exp(s)
        v = sb * math.exp(t)
        q = [0.0] * self.geo.L
        lq = [0.0] * self.geo.L
        for h in self.others:
            al, be, ga = self.coef[h]
            val = al * u + be * v + ga
            q[h] = val
            lq[h] = math.log(abs(val)) if val else -math.inf
        q[self.a], lq[self.a] = u, s
        q[self.b], lq[self.b] = v, t
        q[self.c], lq[self.c] = 1.0, 0.0
        return q, lq, u, v

    def psi(self, j: int, q, lq, u, v) -> tuple[float, float, float, float]:
        """psi_j, its (s, t) gradient and a magnitude scale."""
        W = self.geo.W
        val = self.geo.const[j]
        gs = gt = 0.0
        scale = 1.0
        for h in range(self.geo.L):
            wj = W[h][j]
            if not wj:
                continue
            val += wj * lq[h]
            scale += abs(wj * lq[h])
            if h == self.c:
                continue
            A, B = self._ratios(h, q, u, v)
            gs += wj * A
            gt += wj * B
        return val, gs, gt, scale

    def _ratios(self, h: int, q, u, v) -> tuple[float, float]:
        """d log|q_h| / ds and / dt; exact for the chart's own hyperplanes even if u or v underflow."""
        if h == self.a:
            return 1.0, 0.0
        if h == self.b:
            return 0.0, 1.0
        al, be, _ = self.coef[h]
        return al * u / q[h], be * v / q[h]

    def psi_hess(self, j: int, q, u, v) -> float:
        """Frobenius norm of the (s, t) Hessian of psi_j."""
        hss = hst = htt = 0.0
        for h in self.others + [self.a, self.b]:
            wj = self.geo.W[h][j]
            if not wj:
                continue
            A, B = self._ratios(h, q, u, v)
            hss += wj * (A - A * A)
            hst -= wj * A * B
            htt += wj * (B - B * B)
        return math.sqrt(hss * hss + 2 * hst * hst + htt * htt)

    def fpoly_hess(self, i: int, u: float, v: float) -> float:
        hss = hst = htt = 0.0
        for e1, e2, c in self.Ff[i]:
            term = c * (u ** e1 if e1 else 1.0) * (v ** e2 if e2 else 1.0)
            hss += e1 * e1 * term
            hst += e1 * e2 * term
            htt += e2 * e2 * term
        return math.sqrt(hss * hss + 2 * hst * hst + htt * htt)

    def fpoly(self, i: int, u: float, v: float) -> tuple[float, float, float, float]:
        val = gs = gt = 0.0
        scale = 1e-300
        for e1, e2, c in self.Ff[i]:
            term = c * (u ** e1 if e1 else 1.0) * (v ** e2 if e2 else 1.0)
            val += term
            gs += e1 * term
            gt += e2 * term
            scale += abs(term)
        return val, gs, gt, scale

    def homogeneous(self, u: float, v: float) -> np.ndarray:
        Y = np.array([r[0] * u + r[1] * v + r[2] for r in self.Ninv_f])
        return Y / np.linalg.norm(Y)


@dataclass
class State:
    chart: Chart
    sa: int
    sb: int
    s: float
    t: float

    def data(self):
        return self.chart.logs(self.s, self.t, self.sa, self.sb)


@dataclass
class Found:
    """A point given by log|P_h/P_ref| for every label plus the chamber."""

    logd: tuple[float, ...]  # log|q_h| relative to some reference hyperplane
    chamber: tuple[int, ...]  # label signs sign(P_h / Y0)


_HYST = math.log(4)


class Tracer:
    """Predictor-corrector continuation of C_1 = V(F_0) or C_2 = V(psi_1)."""

    def __init__(self, geo: Geometry, curve: int, opts: SolveOptions):
        self.geo = geo
        self.curve = curve  # 1 or 2
        self.opts = opts
        self.L_seed = -opts.seed_depth
        self.L_end = -opts.seed_depth - 1.0

    # curve equation g and monitored function m ------------------------------
    def g(self, st: State, d=None):
        q, lq, u, v = d or st.data()
        if self.curve == 1:
            return st.chart.fpoly(0, u, v)
        return st.chart.psi(0, q, lq, u, v)

    def step_cap(self, st: State) -> float:
        """Half the distance at which the curve's gradient could vanish.

        Near an almost-singular point of the curve two branches pass close
        to each other; keeping steps below |grad g| / |Hess g| stops the
        corrector from jumping across.
        """
        q, lq, u, v = st.data()
        _, gs, gt, _ = self.g(st, (q, lq, u, v))
        hess = st.chart.fpoly_hess(0, u, v) if self.curve == 1 else st.chart.psi_hess(0, q, u, v)
        if hess == 0:
            return math.inf
        return 0.5 * math.hypot(gs, gt) / hess

    def m(self, st: State, d=None):
        q, lq, u, v = d or st.data()
        return st.chart.psi(0 if self.curve == 1 else 1, q, lq, u, v)

    def in_chamber(self, st: State, q, chamber) -> bool:
        sc = chamber[st.chart.c]
        for h in st.chart.others:
            if q[h] * chamber[h] * sc <= 0:
                return False
        return True

    def newton(self, st: State, chamber, tol: float = 1e-13) -> State | None:
        s, t = st.s, st.t
        for _ in range(8):
            cur = State(st.chart, st.sa, st.sb, s, t)
            d = cur.data()
            if not self.in_chamber(cur, d[0], chamber):
                return None
            val, gs, gt, scale = self.g(cur, d)
            if abs(val) <= tol * scale:
                return cur
            nn = gs * gs + gt * gt
            if nn == 0 or not math.isfinite(nn):
                return None
            s -= val * gs / nn
            t -= val * gt / nn
        cur = State(st.chart, st.sa, st.sb, s, t)
        d = cur.data()
        if self.in_chamber(cur, d[0], chamber):
            val, _, _, scale = self.g(cur, d)
            if abs(val) <= 1e-10 * scale:
                return cur
        return None

    def tangent(self, st: State) -> tuple[float, float] | None:
        _, gs, gt, _ = self.g(st)
        nn = math.hypot(gs, gt)
        if nn == 0 or not math.isfinite(nn):
            return None
        return -gt / nn, gs / nn

    def rechart(self, st: State, chamber) -> State:
        """Switch to the chart of the nearest hyperplanes once the current one is off by 4x."""
        _, lq, _, _ = st.data()
        logd = [lq[h] - self.geo.lognorms[h] for h in range(self.geo.L)]
        ch = st.chart
        outside = min(logd[h] for h in range(self.geo.L) if h not in (ch.a, ch.b))
        if outside >= max(logd[ch.a], logd[ch.b]) - _HYST and logd[ch.c] >= max(logd) - _HYST:
            return st
        a, b, c = self.geo.best_chart(logd)
        new = self.geo.chart(a, b, c)
        sc = chamber[c]
        return State(new, chamber[a] * sc, chamber[b] * sc, lq[a] - lq[c], lq[b] - lq[c])

    def convert(self, st: State, chart: Chart, chamber) -> State:
        q, lq, u, v = st.data()
        sc = chamber[chart.c]
        return State(chart, chamber[chart.a] * sc, chamber[chart.b] * sc, lq[chart.a] - lq[chart.c], lq[chart.b] - lq[chart.c])

    def found_of(self, st: State, chamber) -> Found:
        _, lq, _, _ = st.data()
        return Found(tuple(lq), tuple(chamber))

    # the main loop ------------------------------------------------------------
    def run(self, start: State, direction: tuple[float, float], chamber, closed_target: Found | None, limit_sign):
        """Trace from ``start`` until a face of A+ is reached or the curve closes.

        Returns ``(kind, end_state, candidates, samples)`` where kind is
        'end', 'closed' or 'fail'. ``limit_sign(end_state)`` gives the sign
        the monitored function must show before an end is accepted (or None).
        """
        opts = self.opts
        st = start
        tau = self.tangent(st)
        if tau is None:
            return "fail", st, [], []
        if tau[0] * direction[0] + tau[1] * direction[1] < 0:
            tau = (-tau[0], -tau[1])
        h = min(0.05, opts.max_step, self.step_cap(st))
        mval, ms_, mt_, _ = self.m(st)
        dm = ms_ * tau[0] + mt_ * tau[1]
        candidates = []
        samples = [self._affine(st)] if opts.keep_samples else []
        travelled = 0.0
        far = 0.0  # largest distance from closed_target seen so far
        for _ in range(opts.max_steps):
            pred = State(st.chart, st.sa, st.sb, st.s + h * tau[0], st.t + h * tau[1])
            cor = self.newton(pred, chamber)
            ok = cor is not None
            if ok:
                dist = math.hypot(cor.s - st.s, cor.t - st.t)
                new_tau = self.tangent(cor)
                ok = new_tau is not None and dist < 2 * h
            if ok:
                if new_tau[0] * tau[0] + new_tau[1] * tau[1] < 0:
                    new_tau = (-new_tau[0], -new_tau[1])
                ok = new_tau[0] * tau[0] + new_tau[1] * tau[1] > 0.8
            if not ok:
                h *= 0.5
                if h < opts.min_step:
                    return "fail", st, candidates, samples
                continue
            new_m, ms_, mt_, _ = self.m(cor)
            new_dm = ms_ * new_tau[0] + mt_ * new_tau[1]
            if _sign(new_dm) != _sign(dm) and _sign(new_m) == _sign(mval) and h > opts.extremum_step:
                # the monitor turns inside the step and could hide two zeros;
                # its turning points are the zeros of the next Gamma, resolve them
                h *= 0.5
                continue
            if _sign(new_m) != _sign(mval) and _sign(mval) != 0:
                c = self.polish(st, cor, chamber)
                if c is not None:
                    candidates.append(c)
            travelled += dist
            if closed_target is not None and self._closes(closed_target, st, cor, dist, far):
                return "closed", cor, candidates, samples
            if closed_target is not None:
                far = max(far, self._target_distance(closed_target, cor))
            st, tau, mval, dm = cor, new_tau, new_m, new_dm
            h = min(h * 1.5, opts.max_step, self.step_cap(st))
            if opts.keep_samples:
                samples.append(self._affine(st))
            # termination
            if self._at_face(st):
                want = limit_sign(st)
                if want is None or _sign(mval) == want:
                    return "end", st, candidates, samples
                if min(st.s, st.t) < -700:
                    return "fail", st, candidates, samples
            new_st = self.rechart(st, chamber)
            if new_st is not st:
                tau = self._transport_tangent(st, new_st, tau)
                st = new_st
                _, ms_, mt_, _ = self.m(st)
                dm = ms_ * tau[0] + mt_ * tau[1]
                h = min(h, 0.05)
        return "fail", st, candidates, samples

    @staticmethod
    def _target_xy(target: Found, st: State) -> tuple[float, float]:
        return (target.logd[st.chart.a] - target.logd[st.chart.c],
                target.logd[st.chart.b] - target.logd[st.chart.c])

    def _target_distance(self, target: Found, st: State) -> float:
        tx, ty = self._target_xy(target, st)
        return math.hypot(tx - st.s, ty - st.t)

    def _closes(self, target: Found, prev: State, cur: State, dist: float, far: float) -> bool:
        """Whether the step ``prev -> cur`` passes back over the start point.

        Both states share a chart here. The curve runs through the target, so
        the chord of a step across it misses by O(step^2); the trace must
        first have left the target by a clear margin.
        """
        tol = max(0.25 * dist, 1e-6)
        if far < 8 * tol:
            return False
        tx, ty = self._target_xy(target, cur)
        dx, dy = cur.s - prev.s, cur.t - prev.t
        L2 = dx * dx + dy * dy
        lam = 0.0 if L2 == 0 else min(1.0, max(0.0, ((tx - prev.s) * dx + (ty - prev.t) * dy) / L2))
        return math.hypot(prev.s + lam * dx - tx, prev.t + lam * dy - ty) < tol

    def _transport_tangent(self, old: State, new: State, tau):
        t2 = self.tangent(new)
        if t2 is None:
            return tau
        # compare against a small step along the old tangent, seen in the new chart
        eps = 1e-6
        probe = State(old.chart, old.sa, old.sb, old.s + eps * tau[0], old.t + eps * tau[1])
        _, lq, _, _ = probe.data()
        ch = new.chart
        ds = (lq[ch.a] - lq[ch.c]) - new.s
        dt = (lq[ch.b] - lq[ch.c]) - new.t
        if ds * t2[0] + dt * t2[1] < 0:
            t2 = (-t2[0], -t2[1])
        return t2

    def _at_face(self, st: State) -> bool:
        if self.curve == 1:
            if min(st.s, st.t) >= self.L_end:
                return False
            if self.vertex_end(st):
                return max(st.s, st.t) < self.L_end
            return True
        return max(st.s, st.t) < self.L_end

    def vertex_end(self, st: State) -> bool:
        """Whether a C_1 branch heads into a vertex where F_0 vanishes (slope 1 in log coordinates)."""
        if tuple(sorted((st.chart.a, st.chart.b))) not in self.geo.deg_vertices:
            return False
        tau = self.tangent(st)
        return tau is not None and abs(abs(tau[0]) - abs(tau[1])) < 0.2 and tau[0] * tau[1] > 0

    def _affine(self, st: State):
        q, lq, u, v = st.data()
        Y = st.chart.homogeneous(u, v)
        if abs(Y[0]) < 1e-9:
            return None
        return (float(Y[1] / Y[0]), float(Y[2] / Y[0]))

    def polish(self, a: State, b: State, chamber) -> State | None:
        """Newton on (g, m) from the midpoint of a step that crossed m = 0."""
        if a.chart is not b.chart:
            a = self.convert(a, b.chart, chamber)
        ma, mb = self.m(a)[0], self.m(b)[0]
        lam = ma / (ma - mb) if ma != mb else 0.5
        s = a.s + lam * (b.s - a.s)
        t = a.t + lam * (b.t - a.t)
        return newton2(self, State(b.chart, b.sa, b.sb, s, t), chamber, second=self.m)


def newton2(tr: Tracer, st: State, chamber, second, tol: float = 1e-13) -> State | None:
    s, t = st.s, st.t
    for _ in range(30):
        cur = State(st.chart, st.sa, st.sb, s, t)
        d = cur.data()
        if not tr.in_chamber(cur, d[0], chamber):
            return None
        g, gs, gt, gsc = tr.g(cur, d)
        m, ms_, mt, msc = second(cur, d)
        if abs(g) <= tol * gsc and abs(m) <= tol * msc:
            return cur
        det = gs * mt - gt * ms_
        if det == 0 or not math.isfinite(det):
            return None
        ds = (g * mt - gt * m) / det
        dt = (gs * m - g * ms_) / det
        # damp huge steps
        nrm = math.hypot(ds, dt)
        if nrm > 1.0:
            ds, dt = ds / nrm, dt / nrm
        s -= ds
        t -= dt
    return None


# -----------------------------------------------------------------------------


@dataclass
class EndPoint:
    ident: tuple
    state: State
    chamber: tuple[int, ...]
    direction: tuple[float, float]


def _chamber_of_state(geo: Geometry, st: State) -> tuple[int, ...]:
    """Label signs sign(P_h/Y0) at a chart point."""
    q, _, _, _ = st.data()
    sinf = _sign(q[geo.inf_pos])
    return tuple(_sign(q[h]) * sinf for h in range(geo.L))


def _logd(st: State, geo: Geometry) -> list[float]:
    _, lq, _, _ = st.data()
    return [lq[h] - geo.lognorms[h] for h in range(geo.L)]


class K2Solver:
    def __init__(self, ms: MasterSystem, chain: GammaChain, opts: SolveOptions):
        self.ms = ms
        self.chain = chain
        self.opts = opts
        self.geo = Geometry(ms, chain)
        self.notes: list[str] = []
        self.failed = False
        self._c1_points: dict[int, list] = {}
        self._check()

    def _check(self):
        geo = self.geo
        for h, row in enumerate(geo.W_exact):
            if all(v == 0 for v in row):
                name = "infinity" if geo.labels[h] == INFINITY else f"p_{geo.labels[h] + 1}"
                raise GenericityViolation(f"hyperplane {name} does not enter the master functions")
        arr = Arrangement([self.ms.gd.forms[i] for i in geo.affine])
        issues = arr.genericity_check()
        if issues:
            raise GenericityViolation("; ".join(issues))
        # F_0 vanishes at a vertex exactly when the 2x2 minor of the weights
        # on its two hyperplanes vanishes (three collinear exponent vectors).
        # C_1 then passes through the vertex, which becomes one of its ends.
        self.deg_vertices = geo.deg_vertices
        for a, b in combinations(range(geo.L), 2):
            Y = _cross(geo.H[a], geo.H[b])
            if _hom_eval(geo.F_hom[0], Y) == 0:
                self.deg_vertices.add((a, b))

    # phase A ----------------------------------------------------------------
    def gamma_points(self) -> list[tuple[float, float]]:
        from .oracle import count_real_bivariate

        geo = self.geo
        F0, F1 = self.chain.F
        if F0.is_zero() or F1.is_zero():
            raise PositiveDimensional("Gamma_2 or Gamma_1 vanishes identically")
        if F0.degree() == 0 or F1.degree() == 0:
            return []
        d0 = {e: Fraction(c) for e, c in F0.terms.items()}
        d1 = {e: Fraction(c) for e, c in F1.terms.items()}
        res = count_real_bivariate(d0, d1, locate=True, exclude_axes=False)
        if res.degenerate:
            self.notes.append(f"{res.degenerate} degenerate point(s) in V(Gamma)")
        pts = []
        skip = []
        for a, b in self.deg_vertices:
            Y = _cross(geo.H[a], geo.H[b])
            if Y[0] != 0 and _hom_eval(_homogenize(F1), Y) == 0:
                skip.append((float(Y[1] / Y[0]), float(Y[2] / Y[0])))
        for r in res.roots:
            y = r.point
            if any(math.hypot(y[0] - v[0], y[1] - v[1]) < 1e-8 * (1 + math.hypot(*v)) for v in skip):
                continue  # a vertex of A+, not a point of the complement
            vals = [float(f[0]) + float(f[1]) * y[0] + float(f[2]) * y[1] for f in self.ms.gd.forms]
            if any(abs(v) < 1e-12 for v in vals):
                raise FaceDegeneracy("a point of V(Gamma) lies on the arrangement")
            pts.append(y)
        if len(pts) > gamma_term(self.ms.n, 2):
            raise GenericityViolation("more Gamma points than the Bezout bound")
        return pts

    def state_at_affine(self, y: Sequence[float]) -> tuple[State, tuple[int, ...]]:
        geo = self.geo
        Y = (1.0, float(y[0]), float(y[1]))
        vals = [sum(float(c) * yy for c, yy in zip(h, Y)) for h in geo.H]
        logd = [math.log(abs(v)) - geo.lognorms[h] for h, v in enumerate(vals)]
        a, b, c = geo.best_chart(logd)
        ch = geo.chart(a, b, c)
        chamber = tuple(_sign(v) for v in vals)  # Y0 = 1 > 0
        sc = chamber[c]
        st = State(ch, chamber[a] * sc, chamber[b] * sc, math.log(abs(vals[a] / vals[c])), math.log(abs(vals[b] / vals[c])))
        return st, chamber

    # boundary starts of C_1 ---------------------------------------------------
    def c1_ends(self) -> list[EndPoint]:
        geo = self.geo
        ends = []
        tr = Tracer(geo, 1, self.opts)
        for h in range(geo.L):
            others = [x for x in range(geo.L) if x != h]
            b0, c0 = others[0], others[1]
            ch0 = geo.chart(h, b0, c0)
            # F_0 restricted to the line P_h = 0 (u = 0) as a polynomial in v
            restr: dict[int, Fraction] = {}
            for (e1, e2), c in ch0.F[0].terms.items():
                if e1 == 0:
                    restr[e2] = restr.get(e2, 0) + c
            if not restr or all(v == 0 for v in restr.values()):
                raise FaceDegeneracy("Gamma_2 vanishes on a whole line of A+")
            coeffs = [restr.get(i, Fraction(0)) for i in range(max(restr) + 1)]
            for x in others[1:]:
                if tuple(sorted((h, x))) in self.deg_vertices:
                    Y = _cross(geo.H[h], geo.H[x])
                    vx = _dot(geo.H[b0], Y) / _dot(geo.H[c0], Y) if _dot(geo.H[c0], Y) else None
                    while vx is not None and len(coeffs) > 1 and uv.evaluate(uv.normalize(coeffs), uv.to_mpq(vx)) == 0:
                        coeffs = _deflate(coeffs, vx)
            if len(uv.normalize(coeffs)) <= 1:
                continue
            for k_root, iv in enumerate(uv.isolate_real_roots(coeffs, exclude_zero=True)):
                vstar = uv.root_float(coeffs, iv)
                # locate the face point and pick a good chart around it
                Y = [float(r[0]) * 0 + float(r[1]) * vstar + float(r[2]) for r in ch0.Ninv]
                vals = [sum(float(cc) * yy for cc, yy in zip(geo.H[x], Y)) for x in range(geo.L)]
                logd = [(math.log(abs(vals[x])) if x != h and vals[x] else -math.inf) - geo.lognorms[x] for x in range(geo.L)]
                order = sorted((x for x in range(geo.L) if x != h), key=lambda x: logd[x])
                b, c = order[0], order[-1]
                ch = geo.chart(h, b, c)
                vb = vals[b] / vals[c]
                Yface = np.array(Y) / np.linalg.norm(Y)
                for side in (1, -1):
                    # label signs of the chamber on this side
                    chamber = []
                    for x in range(geo.L):
                        if x == h:
                            sig = side
                        else:
                            sig = _sign(vals[x])
                        chamber.append(sig)
                    sinf = chamber[geo.inf_pos]
                    chamber = tuple(sg * sinf for sg in chamber)
                    sc = chamber[c]
                    st = State(ch, chamber[h] * sc, chamber[b] * sc, tr.L_seed, math.log(abs(vb)))
                    st = self._correct_t(tr, st, chamber)
                    if st is None:
                        self.notes.append("could not seed a C_1 branch")
                        self.failed = True
                        continue
                    ident = ("line", h, k_root, chamber)
                    ends.append(EndPoint(ident, st, chamber, (1.0, 0.0)))
                    self._c1_points.setdefault(h, []).append((Yface, ident))
        return ends

    def _vertex_frame(self, a: int, b: int):
        geo = self.geo
        V = _cross(geo.H[a], geo.H[b])
        vals = [_dot(geo.H[x], V) for x in range(geo.L)]
        rest = [x for x in range(geo.L) if x not in (a, b)]
        c = max(rest, key=lambda x: abs(float(vals[x])) / geo.norms[x])
        return geo.chart(a, b, c), vals

    def _vertex_chamber(self, ch: Chart, vals, sa: int, sb: int) -> tuple[int, ...]:
        """Label signs in the quadrant sign(P_a/P_c) = sa, sign(P_b/P_c) = sb of a vertex."""
        geo = self.geo
        chamber = [_sign(vals[x]) for x in range(geo.L)]
        chamber[ch.a] = sa * chamber[ch.c]
        chamber[ch.b] = sb * chamber[ch.c]
        sinf = chamber[geo.inf_pos]
        return tuple(sg * sinf for sg in chamber)

    def c1_vertex_ends(self) -> list[EndPoint]:
        """Ends of C_1 at vertices where F_0 vanishes: one branch in each of two opposite quadrants."""
        tr = Tracer(self.geo, 1, self.opts)
        ends = []
        for a, b in sorted(self.deg_vertices):
            ch, vals = self._vertex_frame(a, b)
            f = ch.F[0].terms
            c1, c2 = f.get((1, 0), 0), f.get((0, 1), 0)
            if f.get((0, 0), 0) != 0 or c1 == 0 or c2 == 0:
                raise FaceDegeneracy("Gamma_2 is singular at a vertex of A+")
            shift = math.log(abs(float(c1 / c2)))
            s0 = tr.L_seed if shift <= 0 else tr.L_seed - shift
            for sa in (1, -1):
                sb = -sa * _sign(c1 * c2)
                chamber = self._vertex_chamber(ch, vals, sa, sb)
                sc = chamber[ch.c]
                st = tr.newton(State(ch, chamber[a] * sc, chamber[b] * sc, s0, s0 + shift), chamber)
                if st is None:
                    self.notes.append("could not seed a C_1 branch at a vertex")
                    self.failed = True
                    continue
                ends.append(EndPoint(("vertex", a, b, chamber), st, chamber, (1.0, 1.0)))
        return ends

    def _correct_t(self, tr: Tracer, st: State, chamber) -> State | None:
        t = st.t
        for _ in range(50):
            cur = State(st.chart, st.sa, st.sb, st.s, t)
            d = cur.data()
            val, _, gt, scale = tr.g(cur, d)
            if abs(val) <= 1e-13 * scale:
                return cur if tr.in_chamber(cur, d[0], chamber) else None
            if gt == 0:
                return None
            step = val / gt
            t -= max(-1.0, min(1.0, step))
        return None

    # vertex starts of C_2 -------------------------------------------------------
    def c2_ends(self) -> list[EndPoint]:
        geo = self.geo
        tr = Tracer(geo, 2, self.opts)
        ends = []
        for a, b in combinations(range(geo.L), 2):
            wa, wb = geo.W_exact[a][0], geo.W_exact[b][0]
            if wa * wb >= 0:
                continue  # psi_1 has constant sign near this vertex
            rest = [x for x in range(geo.L) if x not in (a, b)]
            ch, vals = self._vertex_frame(a, b)
            c = ch.c
            for sa, sb in product((1, -1), repeat=2):
                chamber = self._vertex_chamber(ch, vals, sa, sb)
                scc = chamber[c]
                # asymptotic line w_a s + w_b t + R0 = 0
                st0 = State(ch, chamber[a] * scc, chamber[b] * scc, 0.0, 0.0)
                q, lq, u, v = st0.chart.logs(-700.0, -700.0, st0.sa, st0.sb)
                R0 = geo.const[0] + sum(geo.W[x][0] * lq[x] for x in rest if x != c)
                s0 = tr.L_seed
                t0 = -(R0 + float(wa) * s0) / float(wb)
                if t0 > tr.L_seed:
                    t0 = tr.L_seed
                    s0 = -(R0 + float(wb) * t0) / float(wa)
                st = tr.newton(State(ch, st0.sa, st0.sb, s0, t0), chamber)
                if st is None:
                    self.notes.append("could not seed a C_2 branch at a vertex")
                    self.failed = True
                    continue
                ident = ("vertex", a, b, chamber)
                ends.append(EndPoint(ident, st, chamber, (1.0, 1.0)))
        return ends

    # phases B and C ---------------------------------------------------------------
    def solve(self) -> SolutionSet:
        geo = self.geo
        opts = self.opts
        self._c1_points = {}
        gpts = self.gamma_points()
        traces = []

        # phase B: C_1 = V(F_0), collect V(psi_1, F_0)
        tr1 = Tracer(geo, 1, opts)
        ends1 = self.c1_ends() + self.c1_vertex_ends()
        c1 = CurveTrace(1)

        def limit1(st: State):
            if tr1.vertex_end(st):
                w = geo.W_exact[st.chart.a][0] + geo.W_exact[st.chart.b][0]
            else:
                w = geo.W[st.chart.a if st.s < st.t else st.chart.b][0]
            return -_sign(w) if w else None

        found_b: list[State] = []
        arcs1 = self._trace_all(tr1, ends1, limit1, c1, self._match_c1, found_b)
        for y in gpts:
            st, chamber = self.state_at_affine(y)
            self._trace_interior(tr1, st, chamber, limit1, c1, found_b)
        inter = self._dedup(found_b)
        c1.flat = len(arcs1)
        traces.append(c1)

        # phase C: C_2 = V(psi_1), collect V(psi_1, psi_2)
        tr2 = Tracer(geo, 2, opts)
        ends2 = self.c2_ends()
        c2 = CurveTrace(2)

        def limit2(st: State):
            a, b = st.chart.a, st.chart.b
            wa1, wb1 = geo.W_exact[a][0], geo.W_exact[b][0]
            wa2, wb2 = geo.W_exact[a][1], geo.W_exact[b][1]
            # along the branch t ~ -(wa1/wb1) s, so psi_2 ~ (wa2 - wb2 wa1/wb1) s
            kappa = wa2 - wb2 * wa1 / wb1 if wb1 else None
            if not kappa:
                return None
            return -_sign(kappa)

        found_c: list[State] = []
        arcs2 = self._trace_all(tr2, ends2, limit2, c2, self._match_c2, found_c)
        for st_b, chamber in inter:
            self._trace_interior(tr2, st_b, chamber, limit2, c2, found_c)
        sols = self._dedup(found_c)
        c2.flat = len(arcs2)
        traces.append(c2)

        solutions, degenerate = [], []
        for st, chamber in sols:
            sol = self._solution(st, chamber)
            if sol is None:
                continue
            (solutions if sol.sigma_min > opts.degen_tol else degenerate).append(sol)
        ledger = Ledger(
            gamma_points=len(gpts),
            flat=[c1.flat, c2.flat],
            intermediate=len(inter),
            flat_bounds=[flat_face_term(self.ms.n, 2, 1), flat_face_term(self.ms.n, 2, 2)],
            gamma_bound=gamma_term(self.ms.n, 2),
        )
        status = VERIFIED
        if self.failed or c1.failures or c2.failures:
            status = UNVERIFIED
        return SolutionSet(status, 2, self.ms.n, solutions, degenerate, ledger, traces, [tuple(p) for p in gpts], self.notes)

    def _trace_all(self, tr: Tracer, ends: list[EndPoint], limit, record: CurveTrace, match, found) -> set:
        arcs = set()
        by_id = {e.ident: e for e in ends}
        partner: dict[tuple, tuple] = {}
        for e in sorted(ends, key=lambda e: repr(e.ident)):
            kind, st, cands, samples = tr.run(e.state, e.direction, e.chamber, None, limit)
            found.extend((c, e.chamber) for c in cands)
            if kind != "end":
                record.failures += 1
                self.notes.append(f"C_{tr.curve} arc from {e.ident[0]} face abandoned ({kind})")
                continue
            other = match(st, e.chamber)
            if other is None or other not in by_id:
                record.failures += 1
                self.notes.append(f"C_{tr.curve} arc ended at an unexpected face point")
                continue
            partner[e.ident] = other
            arcs.add(frozenset((repr(e.ident), repr(other))))
            record.ends.append((e.ident, other))
            if samples:
                record.arcs.append([p for p in samples if p is not None])
        for a, b in partner.items():
            if partner.get(b, a) != a:
                record.failures += 1
                self.notes.append(f"C_{tr.curve} endpoint pairing is inconsistent")
                break
        return arcs

    def _trace_interior(self, tr: Tracer, st: State, chamber, limit, record: CurveTrace, found):
        st = tr.rechart(st, chamber)
        st2 = tr.newton(st, chamber)
        if st2 is None:
            record.failures += 1
            self.notes.append(f"could not start C_{tr.curve} at an interior point")
            return
        target = tr.found_of(st2, chamber)
        tau = tr.tangent(st2)
        if tau is None:
            record.failures += 1
            return
        for direction in (tau, (-tau[0], -tau[1])):
            kind, _, cands, samples = tr.run(st2, direction, chamber, target, limit)
            found.extend((c, chamber) for c in cands)
            if samples:
                record.arcs.append([p for p in samples if p is not None])
            if kind == "closed":
                record.closed += 1
                return
            if kind == "fail":
                record.failures += 1
                self.notes.append(f"C_{tr.curve} trace from an interior point abandoned")
                return

    def _match_c1(self, st: State, chamber):
        if Tracer(self.geo, 1, self.opts).vertex_end(st):
            return self._match_c2(st, chamber)
        h = st.chart.a if st.s < st.t else st.chart.b
        _, _, u, v = st.data()
        Y = st.chart.homogeneous(u, v)
        # nearest root of F_0 on that line, accepted only when it is clearly
        # nearer than any other root in the same chamber
        dists = sorted(
            (min(np.linalg.norm(Y - Yh), np.linalg.norm(Y + Yh)), ident)
            for Yh, ident in self._c1_points.get(h, [])
            if ident[3] == tuple(chamber)
        )
        if not dists or dists[0][0] > 1e-2:
            return None
        if len(dists) > 1 and dists[0][0] > 0.5 * dists[1][0]:
            return None
        return dists[0][1]

    def _match_c2(self, st: State, chamber):
        a, b = sorted((st.chart.a, st.chart.b))
        return ("vertex", a, b, tuple(chamber))

    def _dedup(self, found) -> list[tuple[State, tuple]]:
        out: list[tuple[State, tuple, np.ndarray]] = []
        for st, chamber in found:
            _, lq, _, _ = st.data()
            vec = np.array(lq) - lq[self.geo.inf_pos]
            if any(ch == tuple(chamber) and np.max(np.abs(vec - v)) < 1e-7 for _, ch, v in out):
                continue
            out.append((st, tuple(chamber), vec))
        return [(s, c) for s, c, _ in out]

    def _solution(self, st: State, chamber) -> Solution | None:
        geo = self.geo
        tr = Tracer(geo, 2, self.opts)
        d = st.data()
        q, lq, u, v = d
        p1 = st.chart.psi(0, q, lq, u, v)
        p2 = st.chart.psi(1, q, lq, u, v)
        residual = max(abs(p1[0]), abs(p2[0]))
        # log|p_i| = log|P_i/P_inf| for the affine forms
        logs, signs = [], []
        inf = geo.inf_pos
        for i, f in enumerate(self.ms.gd.forms):
            if i in geo.affine:
                pos = geo.affine.index(i)
                logs.append(lq[pos] - lq[inf])
                signs.append(chamber[pos])
            else:
                logs.append(math.log(abs(float(f[0]))))
                signs.append(_sign(f[0]))
        Y = st.chart.homogeneous(u, v)
        y = (float(Y[1] / Y[0]), float(Y[2] / Y[0]))
        # Jacobian in the chart's log coordinates: scale free near faces and far out
        J = np.array([[p1[1], p1[2]], [p2[1], p2[2]]])
        smin = float(np.linalg.svd(J, compute_uv=False)[-1])
        return Solution(y, tuple(logs), tuple(signs), residual, smin)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _hom_eval(terms, Y):
    return sum(c * Y[0] ** e[0] * Y[1] ** e[1] * Y[2] ** e[2] for c, e in terms)


def _deflate(coeffs: list, r) -> list:
    """Quotient of a low-to-high coefficient list by (v - r)."""
    out = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        acc = coeffs[i] + acc * r
        out[i - 1] = acc
    return out


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


# =============================================================================
# public entry points
# =============================================================================


def solve_gamma_system(chain: GammaChain, ms: MasterSystem | None = None) -> list[tuple[float, ...]]:
    """Points of V(Gamma_1, ..., Gamma_k) in the arrangement complement."""
    if chain.k == 1:
        f0 = chain.F[0].univariate_coeffs()
        if len(uv.normalize(f0)) <= 1:
            return []
        pts = []
        forms = [f for f in (ms.gd.forms if ms else [])]
        for iv in uv.isolate_real_roots(f0):
            y = uv.root_float(f0, iv)
            if all(float(f[0]) + float(f[1]) * y != 0 for f in forms):
                pts.append((y,))
        assert len(pts) <= gamma_term(chain.n, 1)
        return pts
    if chain.k == 2:
        if ms is None:
            raise ValueError("k = 2 needs the master system to exclude the arrangement")
        return [tuple(p) for p in K2Solver(ms, chain, SolveOptions()).gamma_points()]
    raise UnsupportedK("the Gamma system is solved for k <= 2")


def boundary_starts(ms: MasterSystem, j: int, opts: SolveOptions | None = None) -> list[dict]:
    """Face points of the arrangement where the curve ``C_j`` ends.

    For ``k = 1`` these are the roots of the forms plus infinity. For
    ``k = 2`` each entry carries the hyperplanes of the face, the chamber the
    branch enters and its affine position (``None`` at infinity).
    """
    if not 1 <= j <= ms.k:
        raise ValueError(f"need 1 <= j <= k = {ms.k}")
    if ms.k == 1:
        roots = sorted(-f[0] / f[1] for f in ms.gd.forms if f[1])
        return [{"face": (i,), "point": (float(r),)} for i, r in enumerate(roots)] + [
            {"face": (INFINITY,), "point": None}
        ]
    if ms.k != 2:
        raise UnsupportedK("boundary starts are computed for k <= 2")
    solver = K2Solver(ms, build_gamma_chain(ms), opts or SolveOptions())
    ends = solver.c1_ends() + solver.c1_vertex_ends() if j == 1 else solver.c2_ends()
    tr = Tracer(solver.geo, j, solver.opts)
    return [{"face": e.ident, "chamber": e.chamber, "point": tr._affine(e.state)} for e in ends]


def trace_curve(ms: MasterSystem, j: int, opts: SolveOptions | None = None) -> CurveTrace:
    """Trace ``C_j`` for a ``k = 2`` master system.

    ``C_2`` is seeded from the points of ``V(psi_1, Gamma_2)`` found on
    ``C_1``, so this runs the whole pipeline and returns the ``j``-th trace.
    """
    if ms.k != 2:
        raise UnsupportedK("curve tracing is for k = 2; k = 1 sweeps intervals")
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    opts = opts or SolveOptions(keep_samples=True)
    return K2Solver(ms, build_gamma_chain(ms), opts).solve().traces[j - 1]


def sign_condition(ms: MasterSystem, signs: Sequence[int]) -> bool:
    """Whether ``prod_i sign(p_i)^b_ij = 1`` for every j (integer weights)."""
    for j in range(ms.k):
        odd = sum(1 for i, sg in enumerate(signs) if sg < 0 and int(ms.B[i][j]) % 2)
        if odd % 2:
            return False
    return True


def _zero_weight_forms(ms: MasterSystem) -> list[int]:
    return [i for i in ms.nonconstant() if all(b == 0 for b in ms.B[i])]


def _solve_without(ms: MasterSystem, drop: list[int], opts: SolveOptions) -> SolutionSet:
    """Solve with the forms in ``drop`` removed; they do not enter psi at all.

    Their hyperplanes are invisible to the master functions, so the curves
    cross them smoothly. Solutions lying on one of them are discarded.
    """
    keep = [i for i in range(ms.m) if i not in drop]
    gd = GaleDual.from_forms([ms.gd.forms[i] for i in keep], [ms.B[i] for i in keep])
    res = solve_master(MasterSystem(gd, tuple(ms.B[i] for i in keep)), opts)
    res.notes.append(f"forms {[i + 1 for i in drop]} have zero weights and were solved around")

    def widen(sol: Solution) -> Solution | None:
        logs, signs = dict(zip(keep, sol.log_abs_p)), dict(zip(keep, sol.signs))
        for i in drop:
            f = ms.gd.forms[i]
            terms = [float(f[0])] + [float(a) * yi for a, yi in zip(f[1:], sol.y)]
            v = math.fsum(terms)
            if abs(v) <= 1e-12 * sum(map(abs, terms)):
                return None
            logs[i], signs[i] = math.log(abs(v)), _sign(v)
        sol.log_abs_p = tuple(logs[i] for i in range(ms.m))
        sol.signs = tuple(signs[i] for i in range(ms.m))
        return sol

    for name in ("solutions", "degenerate", "off_image"):
        kept = [w for w in map(widen, getattr(res, name)) if w is not None]
        if len(kept) < len(getattr(res, name)):
            res.notes.append("a solution on a zero-weight hyperplane was discarded")
        setattr(res, name, kept)
    res.master = ms
    res.n = ms.n
    return res


def solve_master(ms: MasterSystem, opts: SolveOptions | None = None) -> SolutionSet:
    opts = opts or SolveOptions()
    if ms.k not in (1, 2):
        raise UnsupportedK(f"Khovanskii-Rolle solving is implemented for k <= 2, got k = {ms.k}")
    drop = _zero_weight_forms(ms) if ms.k == 2 else []
    if drop and ms.m - len(drop) > ms.k and exact.rank([ms.gd.forms[i][1:] for i in range(ms.m) if i not in drop]) == ms.k:
        return _solve_without(ms, drop, opts)
    chain = build_gamma_chain(ms)
    if ms.k == 1:
        res = _solve_k1(ms, chain, opts)
    else:
        res = K2Solver(ms, chain, opts).solve()
    res.master = ms
    keep = []
    for sol in res.solutions:
        (keep if sign_condition(ms, sol.signs) else res.off_image).append(sol)
    res.solutions = keep
    res.degenerate = [s for s in res.degenerate if sign_condition(ms, s.signs)]
    bad = res.ledger_violations()
    if bad:
        res.notes.extend(bad)
        res.status = UNVERIFIED
    return res


def _lift(res: SolutionSet, sys: SparseSystem) -> None:
    W = sys.support
    for sol in res.solutions + res.degenerate:
        z = sol.z()
        try:
            x = lift_to_torus(W, z, tol=1e-6)
        except Exception as exc:  # keep the master solution, note the failure
            res.notes.append(f"lift failed: {exc}")
            continue
        sol.x = x
        sol.sparse_residual = _sparse_residual(sys, x)


def _sparse_residual(sys: SparseSystem, x) -> float:
    W = sys.support
    mons = [1.0]
    for w in W.vectors[1:]:
        v = 1.0
        for xi, e in zip(x, w):
            v *= float(xi) ** e
        mons.append(v)
    worst = 0.0
    for row in sys.coefficients:
        terms = [float(c) * mv for c, mv in zip(row, mons)]
        scale = sum(abs(t) for t in terms) or 1.0
        worst = max(worst, abs(sum(terms)) / scale)
    return worst


def _solve_k0(sys: SparseSystem) -> SolutionSet:
    """``k = 0``: the equations are linear in the monomials, so ``L`` is one point."""
    res = SolutionSet(VERIFIED, 0, sys.n, [], [], None, system=sys)
    try:
        gd = build_gale_dual(sys)
    except DegenerateIntersection:
        return res  # some monomial is forced to vanish
    z = [f[0] for f in gd.forms]
    sol = Solution((), tuple(math.log(abs(float(v))) for v in z), tuple(_sign(v) for v in z), 0.0, math.inf)
    res.solutions.append(sol)
    res.master = MasterSystem.from_gale(gd)
    _lift(res, sys)
    return res


def solve_sparse(sys: SparseSystem, opts: SolveOptions | None = None) -> SolutionSet:
    """Nondegenerate nonzero real solutions of ``sys`` through its Gale dual."""
    opts = opts or SolveOptions()
    parity = span_index_parity(sys.support)
    if parity.rank_deficient:
        raise RankDeficient("exponent vectors do not span R^n; the system has infinitely many solutions")
    if parity.even:
        raise EvenIndex(
            f"exponents span a sublattice of even index {parity.index}; "
            "the bound needs the exponents to span Z^n mod 2 (odd index)"
        )
    if sys.k == 0:
        return _solve_k0(sys)
    if sys.k not in (1, 2):
        raise UnsupportedK(f"Khovanskii-Rolle solving is implemented for k <= 2, got k = {sys.k}")
    notes = []
    attempts = opts.retries + 1
    for attempt in range(attempts):
        perturb = opts.perturb == "always" or (opts.perturb == "auto" and attempt > 0)
        cur = sys.perturbed(opts.perturb_rel, opts.seed + attempt) if perturb else sys
        try:
            gd = build_gale_dual(cur)
            ms = generic_basis(MasterSystem.from_gale(gd), seed=opts.seed + attempt)
            res = solve_master(ms, opts)
        except (GenericityViolation, DegenerateIntersection, PositiveDimensional) as exc:
            notes.append(f"attempt {attempt}: {type(exc).__name__}: {exc}")
            if opts.perturb == "never":
                break
            continue
        res.notes = notes + res.notes
        res.perturbed = perturb
        res.system = cur
        _lift(res, cur)
        return res
    return SolutionSet(UNVERIFIED, sys.k, sys.n, [], [], None, notes=notes, system=sys)
