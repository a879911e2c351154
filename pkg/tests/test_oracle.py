import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fewnomial.errors import PositiveDimensional, UnsupportedDimension, ZeroPolynomial
from fewnomial.gale import SparseSystem
from fewnomial.instances import random_instance, random_trinomial
from fewnomial.lattice import kouchnirenko_bound
from fewnomial.oracle import count_real_bivariate, count_real_univariate, laurent_to_polynomial, oracle_count


def test_laurent_clearing():
    sys = SparseSystem.from_data([[-1], [0], [1]], [[1, 2, 1]])
    cl = laurent_to_polynomial(sys)
    # the support is already translated so that x^-1 leads
    assert cl.polys[0] == {(0,): 1, (1,): 2, (2,): 1}
    poly = SparseSystem.from_data([[0], [1], [3]], [[2, -3, 1]])
    assert laurent_to_polynomial(poly).shift == (0,)
    two = SparseSystem.from_data([[0, 0], [-1, 1], [1, 0]], [[0, 1, 1], [1, 2, 3]])
    cl = laurent_to_polynomial(two)
    assert cl.polys[0] == {(0, 1): 1, (2, 0): 1} and cl.shift == (1, 0)


def test_univariate_examples():
    r = count_real_univariate([2, -3, 0, 1])
    assert (r.count, r.degenerate) == (1, 1)
    assert r.roots[0].point[0] == pytest.approx(-2)
    r = count_real_univariate([4, 0, -5, 0, 1])
    assert r.count == 4 and r.positive == 2
    assert count_real_univariate([1, 0, 1]).count == 0
    assert count_real_univariate([0, 0, 1]).count == 0
    with pytest.raises(ZeroPolynomial):
        count_real_univariate([0])


def test_bivariate_examples():
    r = count_real_bivariate({(2, 0): 1, (0, 2): 1, (0, 0): -1}, {(1, 0): 1, (0, 1): -1})
    assert r.count == 2
    pts = sorted(root.point for root in r.roots)
    assert pts[1] == pytest.approx((2 ** -0.5, 2 ** -0.5))
    assert count_real_bivariate({(1, 0): 1, (0, 0): -1}, {(0, 1): 1, (0, 0): -2}).count == 1
    r = count_real_bivariate({(1, 1): 1, (0, 0): -1}, {(1, 0): 1, (0, 1): -1})
    assert r.count == 2 and all(root.jacobian_certified for root in r.roots)
    # axis solutions are excluded: x*y = 0 with x = y has only (0, 0)
    assert count_real_bivariate({(1, 1): 1}, {(1, 0): 1, (0, 1): -1}).count == 0
    with pytest.raises(PositiveDimensional):
        count_real_bivariate({(1, 0): 1, (0, 1): 1}, {(1, 0): 2, (0, 1): 2})


def test_oracle_even_index_counterexample():
    rep = oracle_count(SparseSystem.from_data([[0], [2], [4]], [[4, -5, 1]]))
    assert rep.count == 4 and rep.parity == "Even(2)"


def test_oracle_generic_k1_sharp_bound():
    for seed in range(15):
        sys = random_instance(2, 1, seed, exp_range=4)
        rep = oracle_count(sys)
        assert rep.count <= 5 and rep.positive <= 3
        assert rep.count <= kouchnirenko_bound(sys.support)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_trinomial_counts(seed):
    sys = random_trinomial(random.Random(seed))
    assert oracle_count(sys).count <= 3


def _sympy_count(sys):
    """Independent count: sympy solve of the cleared system, simple nonzero real roots only."""
    x, y = sympy.symbols("x y")
    cl = laurent_to_polynomial(sys)
    F = [sum(sympy.Rational(c.numerator, c.denominator) * x ** e[0] * y ** e[1] for e, c in d.items()) for d in cl.polys]
    J = sympy.Matrix(F).jacobian([x, y])
    count = 0
    for sol in sympy.solve(F, [x, y], dict=True):
        vx, vy = complex(sol[x].evalf(50)), complex(sol[y].evalf(50))
        if abs(vx.imag) > 1e-20 or abs(vy.imag) > 1e-20 or vx.real == 0 or vy.real == 0:
            continue
        if abs(complex(J.subs(sol).det().evalf(50))) > 1e-20:
            count += 1
    return count


@pytest.mark.parametrize("seed", range(5))
def test_bivariate_against_sympy(seed):
    sys = SparseSystem.from_data(
        [[0, 0], [1, 0], [0, 1], [1, 1]],
        [[Fraction(random.Random(seed * 7 + i).randint(-9, 9) or 1) for i in range(4)],
         [Fraction(random.Random(seed * 11 + i + 50).randint(-9, 9) or 1) for i in range(4)]],
    )
    assert oracle_count(sys).count == _sympy_count(sys)


def test_count_stable_under_locate():
    for seed in range(8):
        sys = random_instance(2, 2, seed, exp_range=3)
        assert oracle_count(sys, locate=True).count == oracle_count(sys, locate=False).count


def test_dimension_scope():
    with pytest.raises(UnsupportedDimension):
        oracle_count(random_instance(3, 1, 0, exp_range=2))
