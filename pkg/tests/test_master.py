import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fewnomial.errors import OnArrangement, UnsupportedK
from fewnomial.gale import GaleDual, build_gale_dual
from fewnomial.instances import random_instance
from fewnomial.master import MasterSystem, build_gamma_chain, generic_basis


@pytest.fixture
def tri_ms(trinomial):
    return MasterSystem.from_gale(build_gale_dual(trinomial, free=[0]))


def test_psi_examples(tri_ms):
    assert tri_ms.eval_psi([1])[0] == pytest.approx(0, abs=1e-15)
    assert tri_ms.eval_psi([2])[0] == pytest.approx(math.log(2))
    assert tri_ms.eval_grad_psi([1])[0, 0] == pytest.approx(0, abs=1e-15)
    assert tri_ms.eval_grad_psi([2])[0, 0] == pytest.approx(0.75)
    with pytest.raises(OnArrangement):
        tri_ms.eval_psi([Fraction(2, 3)])


def test_zero_weight_row_gives_zero_gradient():
    gd = GaleDual.from_forms([(1, 1, 0), (2, 0, 1), (3, 1, 1)], [(1, 0), (-1, 0), (2, 0)])
    ms = MasterSystem.from_gale(gd)
    assert np.allclose(ms.eval_grad_psi([0.3, 0.2])[1], 0)


def test_all_forms_one():
    gd = GaleDual.from_forms([(1, 0), (1, 0)], [(5,), (-7,)])
    assert MasterSystem.from_gale(gd).eval_psi([3.0])[0] == 0


def test_gamma_chain_k1(tri_ms):
    chain = build_gamma_chain(tri_ms)
    F0 = chain.F[0]
    assert F0.univariate_coeffs() == [-6, 6]
    gd = GaleDual.from_forms([(0, 1), (-1, 1)], [(1,), (-1,)])
    assert build_gamma_chain(MasterSystem.from_gale(gd)).F[0].univariate_coeffs() == [-1]


def test_gamma_chain_rejects_k3():
    sys = random_instance(1, 3, 0, exp_range=6)
    with pytest.raises(UnsupportedK):
        build_gamma_chain(MasterSystem.from_gale(build_gale_dual(sys)))


def _fd_grad(fn, y, h=1e-6):
    y = np.asarray(y, dtype=float)
    out = []
    for i in range(len(y)):
        e = np.zeros_like(y)
        e[i] = h * max(1.0, abs(y[i]))
        out.append((fn(y + e) - fn(y - e)) / (2 * e[i]))
    return np.array(out).T


@given(st.integers(0, 5000), st.sampled_from([(1, 1), (2, 1), (1, 2), (2, 2)]))
def test_gradient_matches_finite_differences(seed, nk):
    ms = MasterSystem.from_gale(build_gale_dual(random_instance(*nk, seed, exp_range=4)))
    rng = np.random.default_rng(seed)
    for _ in range(20):
        y = rng.uniform(-3, 3, ms.k)
        vals = np.array([float(v) for v in ms.form_values(y)])
        if np.min(np.abs(vals)) < 1e-2:
            continue
        g = ms.eval_grad_psi(y)
        fd = _fd_grad(ms.eval_psi, y)
        assert np.allclose(g, fd, rtol=1e-6, atol=1e-6 * np.abs(g).max())


@given(st.integers(0, 5000), st.integers(1, 2))
def test_degree_certificates(seed, n):
    sys = random_instance(n, 2, seed, exp_range=4)
    ms = MasterSystem.from_gale(build_gale_dual(sys))
    chain = build_gamma_chain(ms)
    assert chain.degrees()[0] <= n and chain.degrees()[1] <= 2 * n
    assert all(isinstance(c, Fraction) for f in chain.F for c in f.terms.values())


def _gamma2(ms, y):
    return np.linalg.det(ms.eval_grad_psi(y))


@pytest.mark.parametrize("seed", range(6))
def test_F1_sign_matches_gamma1(seed):
    ms = generic_basis(MasterSystem.from_gale(build_gale_dual(random_instance(1, 2, seed, exp_range=5))), seed=seed)
    chain = build_gamma_chain(ms)
    rng = random.Random(seed)
    checked = 0
    for _ in range(200):
        y = np.array([rng.uniform(-2, 2), rng.uniform(-2, 2)])
        vals = np.array([float(v) for v in ms.form_values(y)])
        if np.min(np.abs(vals)) < 0.1:
            continue
        g1 = ms.eval_grad_psi(y)[0]
        dg2 = _fd_grad(lambda p: np.array([_gamma2(ms, p)]), y, 1e-5)[0]
        gamma1 = g1[0] * dg2[1] - g1[1] * dg2[0]
        F1 = float(chain.F[1](*(Fraction(v) for v in y)))
        P = float(np.prod(vals))
        if abs(F1) < 1e-6 * max(1.0, abs(gamma1 * P * P)):
            continue
        assert gamma1 * P * P == pytest.approx(F1, rel=1e-4)
        checked += 1
    assert checked > 20
