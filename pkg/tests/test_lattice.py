import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fewnomial import exact
from fewnomial.errors import DuplicateExponent, RankDeficient, UnsupportedDimension
from fewnomial.lattice import (
    ExponentSupport,
    kouchnirenko_bound,
    normalize_support,
    relation_kernel,
    smith_normal_form,
    span_index_parity,
)
from fewnomial.master import random_unimodular


def W(*vecs):
    return normalize_support([v if isinstance(v, (list, tuple)) else [v] for v in vecs])


def test_normalize_translates_to_origin():
    s = normalize_support([(1, 1), (2, 1), (1, 2)])
    assert s.vectors == ((0, 0), (1, 0), (0, 1))
    assert s.translation == (1, 1)
    assert W(0, 1, 3).vectors == ((0,), (1,), (3,))
    assert W(2, 4, 5).vectors == ((0,), (2,), (3,))
    assert W(2, 4, 5).k == 1


def test_duplicate_exponent():
    with pytest.raises(DuplicateExponent):
        normalize_support([(1,), (2,), (1,)])


def test_span_index_examples():
    assert span_index_parity(W(0, 1)).odd
    p = span_index_parity(W(0, 2, 4))
    assert p.even and p.index == 2 and str(p) == "Even(2)"
    q = span_index_parity(W((0, 0), (2, 0), (0, 3), (1, 1)))
    assert q.odd and q.index == 1
    assert span_index_parity(W((0, 0), (1, 1), (2, 2))).rank_deficient


def test_relation_kernel_examples():
    assert relation_kernel(W(0, 1, 2)).B == ((2,), (-1,))
    assert relation_kernel(W(0, 1, 3)).B == ((3,), (-1,))
    sq = relation_kernel(W((0, 0), (1, 0), (0, 1), (1, 1)))
    assert sq.B == ((1,), (1,), (-1,))
    with pytest.raises(RankDeficient):
        relation_kernel(W((0, 0), (1, 1), (2, 2), (3, 3)))


def test_kouchnirenko_examples():
    assert kouchnirenko_bound(W((0, 0), (1, 0), (0, 1))) == 1
    assert kouchnirenko_bound(W((0, 0), (1, 0), (0, 1), (1, 1))) == 2
    assert kouchnirenko_bound(W(*range(6))) == 5
    cube = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    assert kouchnirenko_bound(normalize_support(cube)) == 6
    with pytest.raises(UnsupportedDimension):
        kouchnirenko_bound(normalize_support([(0,) * 4, (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]))


small_ints = st.integers(-6, 6)


@given(st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=2, max_size=3))
def test_smith_normal_form_certificate(rows):
    D, U, V = smith_normal_form(rows)
    assert exact.matmul(exact.matmul(U, rows), V) == D
    assert abs(exact.det(U)) == 1 and abs(exact.det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            if i != j:
                assert v == 0
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0


supports_2d = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=6, unique=True)


@given(supports_2d)
def test_kernel_annihilates_support(vecs):
    s = normalize_support(vecs)
    if span_index_parity(s).rank_deficient:
        return
    B = relation_kernel(s)
    assert len(B.B) == s.m and B.k == s.k
    for col in B.columns:
        for r in range(s.n):
            assert sum(c * w[r] for c, w in zip(col, s.vectors[1:])) == 0
        ints = [int(c) for c in col]
        assert all(Fraction(i) == c for i, c in zip(ints, col))
    assert exact.rank(B.columns) == s.k


@given(supports_2d, st.integers(0, 10_000), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_parity_and_volume_invariance(vecs, seed, shift):
    s = normalize_support(vecs)
    T = random_unimodular(2, random.Random(seed))
    moved = [[sum(T[i][j] * v[j] for j in range(2)) + shift[i] for i in range(2)] for v in vecs]
    t = normalize_support(moved)
    assert span_index_parity(s) == span_index_parity(t)
    assert kouchnirenko_bound(s) == kouchnirenko_bound(t)


def test_support_type_invariants():
    with pytest.raises(ValueError):
        ExponentSupport(1, ((1,), (2,)), (0,))
