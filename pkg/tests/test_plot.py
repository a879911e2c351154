import re
import xml.etree.ElementTree as ET

import pytest

from fewnomial.errors import UnsupportedK
from fewnomial.instances import random_instance
from fewnomial.plot import plot_instance, plot_solution_set
from fewnomial.solver import solve_sparse

SVG = "{http://www.w3.org/2000/svg}"


def test_k2_triangle_plot():
    sys = random_instance(1, 2, 5, exp_range=6)
    svg = plot_instance(sys, seed=0)
    root = ET.fromstring(svg)
    assert root.get("version") == "1.1"
    lines = [e for e in root.iter(SVG + "line") if e.get("stroke-dasharray")]
    assert len(lines) == 3
    assert len(list(root.iter(SVG + "polyline"))) >= 1
    text = " ".join(t.text or "" for t in root.iter(SVG + "text"))
    assert "infinity" in text and "flat" in text
    assert svg == plot_instance(sys, seed=0)


def test_k1_number_line(trinomial):
    svg = plot_instance(trinomial)
    root = ET.fromstring(svg)
    shades = [r for r in root.iter(SVG + "rect") if r.get("fill") in ("#eef3fb", "#fbf3ee")]
    assert len(shades) == 3  # chambers (-inf, 0), (0, 2/3), (2/3, inf)
    assert re.search(r"Gamma_1 = 0", svg)


def test_k_above_two():
    with pytest.raises(UnsupportedK):
        plot_instance(random_instance(1, 3, 0, exp_range=6))


def test_needs_master(trinomial):
    res = solve_sparse(trinomial)
    res.master = None
    with pytest.raises(ValueError):
        plot_solution_set(res)
