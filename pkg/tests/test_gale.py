import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fewnomial import exact
from fewnomial.errors import DegenerateIntersection, EvenIndex, InconsistentPoint, RankDeficient
from fewnomial.gale import (
    GaleDual,
    SparseSystem,
    build_gale_dual,
    form_eval,
    lift_to_torus,
    phi_w,
    push_to_torus_coords,
    verify_duality,
)
from fewnomial.instances import random_instance
from fewnomial.lattice import normalize_support, span_index_parity


def test_trinomial_dual(trinomial):
    gd = build_gale_dual(trinomial, free=[0])
    assert gd.forms == ((0, 1), (-2, 3))
    assert gd.weights.B == ((3,), (-1,))
    assert push_to_torus_coords(gd, [1]) == (1, 1)
    assert push_to_torus_coords(gd, [0]) == (0, -2)
    # default parametrization pivots on the largest entry (-3)
    gd2 = build_gale_dual(trinomial)
    assert gd2.m == 2 and gd2.k == 1 and gd2.essential


def test_identity_pivot_instance():
    sys = SparseSystem.from_data([[0, 0], [1, 0], [0, 1], [1, 1]], [[-1, 1, 0, 0], [-2, 0, 1, 0]])
    gd = build_gale_dual(sys)
    assert gd.weights.B == ((1,), (1,), (-1,))
    # z1 = 1 and z2 = 2 are forced; z3 parametrizes
    assert gd.forms[0] == (1, 0) and gd.forms[1] == (2, 0) and gd.forms[2] == (0, 1)
    assert verify_duality(sys, gd).passed


def test_hypothesis_errors():
    with pytest.raises(EvenIndex):
        build_gale_dual(SparseSystem.from_data([[0], [2], [4]], [[4, -5, 1]]))
    with pytest.raises(RankDeficient):
        build_gale_dual(SparseSystem.from_data([[0, 0], [1, 1], [2, 2]], [[1, 1, 1], [1, 2, 3]]))
    # z1 = 0 on the whole solution space
    with pytest.raises(DegenerateIntersection):
        build_gale_dual(SparseSystem.from_data([[0], [1], [2]], [[0, 1, 0]]))


def test_verify_duality_and_negative_control(trinomial):
    gd = build_gale_dual(trinomial)
    rep = verify_duality(trinomial, gd, samples=100, seed=1)
    assert rep.passed and rep.max_linear_residual == 0 and rep.max_monomial_residual == 0
    forms = [list(f) for f in gd.forms]
    forms[0][0] += Fraction(1, 7)
    bad = GaleDual.from_forms(forms, gd.weights.B)
    rep = verify_duality(trinomial, bad, samples=20, seed=1)
    assert not rep.passed and rep.max_linear_residual > 0


def test_lift_examples():
    W = normalize_support([[0], [1], [3]])
    assert lift_to_torus(W, (-2, -8)) == (-2,)
    W2 = normalize_support([[0, 0], [1, 0], [0, 1], [1, 1]])
    assert lift_to_torus(W2, (2, 3, 6)) == (2, 3)
    W3 = normalize_support([[0, 0], [2, 1], [1, 2]])
    assert lift_to_torus(W3, (8, 8)) == (2, 2)
    with pytest.raises(InconsistentPoint):
        lift_to_torus(W, (-2, 8))
    with pytest.raises(EvenIndex):
        lift_to_torus(normalize_support([[0], [2], [4]]), (4, 16))


def test_lift_float_input():
    W = normalize_support([[0, 0], [3, 1], [1, 2], [2, 5]])
    x = (-1.3, 0.7)
    z = [float(v) for v in phi_w(W, [Fraction(v) for v in x])]
    got = lift_to_torus(W, z)
    assert got == pytest.approx(x, rel=1e-13)


nonzero = st.fractions(min_value=-9, max_value=9, max_denominator=7).filter(lambda q: q != 0)
supports = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=5, unique=True)


@given(supports, st.tuples(nonzero, nonzero))
def test_lift_round_trip_exact(vecs, x):
    W = normalize_support(vecs)
    assume(span_index_parity(W).odd)
    assert lift_to_torus(W, phi_w(W, x)) == tuple(x)


@given(st.integers(0, 10_000), st.sampled_from([(1, 1), (2, 1), (1, 2), (2, 2)]))
def test_forms_land_on_L(seed, nk):
    sys = random_instance(*nk, seed, exp_range=4)
    gd = build_gale_dual(sys)
    assert gd.m == sys.n + sys.k and gd.linear_rank() == gd.k
    rng = random.Random(seed)
    for _ in range(10):
        y = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(gd.k)]
        z = [form_eval(f, y) for f in gd.forms]
        for row in sys.coefficients:
            assert row[0] + sum(c * zi for c, zi in zip(row[1:], z)) == 0


def test_weights_are_relations():
    sys = random_instance(2, 2, 11, exp_range=4)
    W = sys.support
    gd = build_gale_dual(sys)
    M = exact.matmul(W.matrix(), gd.weights.B)
    assert all(v == 0 for row in M for v in row)
