"""Static SVG pictures of the arrangement, the traced curves and the solutions."""

from __future__ import annotations

import math
from itertools import combinations
from xml.sax.saxutils import escape

from .errors import UnsupportedK
from .gale import SparseSystem
from .solver import SolutionSet, SolveOptions, solve_sparse

WIDTH, HEIGHT = 640, 520
MARGIN = 40
COLORS = {"line": "#555555", "C1": "#1f77b4", "C2": "#d62728", "gamma": "#2ca02c", "sol": "#000000"}


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, box: tuple[float, float, float, float]):
        self.x0, self.x1, self.y0, self.y1 = box
        self.items: list[str] = []

    def px(self, x: float, y: float) -> tuple[float, float]:
        sx = MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)
        sy = HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2 * MARGIN - 60)
        return sx, sy

    def inside(self, x: float, y: float, slack: float = 0.05) -> bool:
        dx, dy = (self.x1 - self.x0) * slack, (self.y1 - self.y0) * slack
        return self.x0 - dx <= x <= self.x1 + dx and self.y0 - dy <= y <= self.y1 + dy

    def add(self, item: str) -> None:
        self.items.append(item)

    def polyline(self, pts, color: str, width: float = 1.5) -> None:
        runs: list[list[tuple[float, float]]] = [[]]
        for p in pts:
            if p is None or not all(map(math.isfinite, p)) or not self.inside(*p):
                if runs[-1]:
                    runs.append([])
                continue
            runs[-1].append(self.px(*p))
        for run in runs:
            if len(run) >= 2:
                d = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in run)
                self.add(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def dot(self, x: float, y: float, color: str, r: float = 3.5, shape: str = "circle") -> None:
        if not self.inside(x, y, 0):
            return
        a, b = self.px(x, y)
        if shape == "square":
            self.add(f'<rect x="{_fmt(a - r)}" y="{_fmt(b - r)}" width="{_fmt(2 * r)}" height="{_fmt(2 * r)}" fill="{color}"/>')
        else:
            self.add(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="{_fmt(r)}" fill="{color}"/>')

    def text(self, x: float, y: float, s: str, size: int = 12) -> None:
        self.add(f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="monospace" font-size="{size}">{escape(s)}</text>')

    def render(self, title: str) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
            f'<text x="{MARGIN}" y="24" font-family="monospace" font-size="14">{escape(title)}</text>\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def _box(points: list[tuple[float, float]]) -> tuple[float, float, float, float]:
    pts = [p for p in points if all(map(math.isfinite, p)) and max(map(abs, p)) < 1e6]
    if not pts:
        return -1.0, 1.0, -1.0, 1.0
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1.0)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    half = 0.65 * span
    return cx - half, cx + half, cy - half, cy + half


def _legend(c: _Canvas, res: SolutionSet) -> None:
    led = res.ledger
    line = f"status {res.status}  solutions {res.count}"
    if led:
        line += f"  flat {led.flat}  |V(Gamma)| {led.gamma_points}"
    c.text(MARGIN, 44, line)


def _plot_k1(res: SolutionSet) -> str:
    forms = res.master.gd.forms
    roots = sorted(float(-f[0] / f[1]) for f in forms if f[1])
    marks = roots + [g[0] for g in res.gamma_points] + [s.y[0] for s in res.solutions + res.degenerate]
    lo, hi = min(marks, default=-1.0), max(marks, default=1.0)
    pad = max(hi - lo, 1.0) * 0.15
    c = _Canvas((lo - pad, hi + pad, -1.0, 1.0))
    edges = [c.x0] + roots + [c.x1]
    for i, (a, b) in enumerate(zip(edges, edges[1:])):
        xa, _ = c.px(a, 0)
        xb, _ = c.px(b, 0)
        shade = "#eef3fb" if i % 2 == 0 else "#fbf3ee"
        c.add(f'<rect x="{_fmt(xa)}" y="{_fmt(HEIGHT / 2 - 40)}" width="{_fmt(xb - xa)}" height="80" fill="{shade}"/>')
    x0, y = c.px(c.x0, 0)
    x1, _ = c.px(c.x1, 0)
    c.add(f'<line x1="{_fmt(x0)}" y1="{_fmt(y)}" x2="{_fmt(x1)}" y2="{_fmt(y)}" stroke="{COLORS["line"]}"/>')
    for r in roots:
        xr, _ = c.px(r, 0)
        c.add(f'<line x1="{_fmt(xr)}" y1="{_fmt(y - 40)}" x2="{_fmt(xr)}" y2="{_fmt(y + 40)}" stroke="{COLORS["line"]}" stroke-dasharray="4 3"/>')
        c.text(xr + 3, y + 55, f"{r:.4g}", 10)
    for g in res.gamma_points:
        c.dot(g[0], 0, COLORS["gamma"], shape="square")
    for s in res.solutions:
        c.dot(s.y[0], 0, COLORS["sol"], r=5)
    for s in res.degenerate:
        c.dot(s.y[0], 0, "#999999", r=5)
    _legend(c, res)
    c.text(MARGIN, HEIGHT - 12, "dashed: form roots  square: Gamma_1 = 0  dot: solution", 11)
    return c.render("master function psi_1 on the line (k = 1)")


def _plot_k2(res: SolutionSet) -> str:
    forms = [f for f in res.master.gd.forms if f[1] or f[2]]
    verts = []
    for f, g in combinations(forms, 2):
        d = f[1] * g[2] - f[2] * g[1]
        if d:
            verts.append((float((f[2] * g[0] - f[0] * g[2]) / d), float((f[0] * g[1] - f[1] * g[0]) / d)))
    pts = verts + [tuple(p) for p in res.gamma_points] + [s.y for s in res.solutions]
    c = _Canvas(_box(pts))
    for f in forms:
        a0, a1, a2 = (float(v) for v in f)
        # a0 + a1 x + a2 y = 0 clipped to the box
        if abs(a2) >= abs(a1):
            seg = [(x, -(a0 + a1 * x) / a2) for x in (c.x0, c.x1)]
        else:
            seg = [(-(a0 + a2 * y) / a1, y) for y in (c.y0, c.y1)]
        (xa, ya), (xb, yb) = (c.px(*p) for p in seg)
        c.add(f'<line x1="{_fmt(xa)}" y1="{_fmt(ya)}" x2="{_fmt(xb)}" y2="{_fmt(yb)}" stroke="{COLORS["line"]}" stroke-dasharray="5 3"/>')
    for trace in res.traces:
        color = COLORS["C1"] if trace.j == 1 else COLORS["C2"]
        for arc in trace.arcs:
            c.polyline(arc, color)
    for g in res.gamma_points:
        c.dot(g[0], g[1], COLORS["gamma"], shape="square")
    for s in res.solutions:
        c.dot(s.y[0], s.y[1], COLORS["sol"], r=5)
    _legend(c, res)
    c.text(MARGIN, HEIGHT - 12, "dashed: lines of A (plus the line at infinity)  blue: C_1  red: C_2", 11)
    return c.render("arrangement, Khovanskii-Rolle curves and solutions (k = 2)")


def plot_solution_set(res: SolutionSet) -> str:
    if res.master is None:
        raise ValueError("solution set carries no master system to draw")
    if res.k == 1:
        return _plot_k1(res)
    if res.k == 2:
        return _plot_k2(res)
    raise UnsupportedK(f"plots are available for k <= 2, got k = {res.k}")


def plot_instance(sys: SparseSystem, seed: int = 0) -> str:
    """Solve ``sys`` with curve samples kept and return the SVG text."""
    if sys.k not in (1, 2):
        raise UnsupportedK(f"plots are available for k <= 2, got k = {sys.k}")
    res = solve_sparse(sys, SolveOptions(seed=seed, keep_samples=True))
    return plot_solution_set(res)

