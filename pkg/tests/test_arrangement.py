import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fewnomial.arrangement import INFINITY, Arrangement, face_count, generic_chamber_count
from fewnomial.errors import GenericityViolation

TRIANGLE = [(0, 1, 0), (0, 0, 1), (-1, 1, 1)]


def random_lines(m: int, seed: int) -> Arrangement:
    rng = random.Random(seed)
    while True:
        forms = [tuple(Fraction(rng.randint(-9, 9)) for _ in range(3)) for _ in range(m)]
        if any(f[1] == f[2] == 0 for f in forms):
            continue
        try:
            arr = Arrangement(forms)
        except ValueError:
            continue
        if arr.is_generic():
            return arr


def test_genericity_examples():
    assert Arrangement(TRIANGLE).genericity_check() == []
    parallel = Arrangement([(0, 1, 0), (-1, 1, 0), (0, 0, 1)]).genericity_check()
    assert any("infinity" in msg for msg in parallel)
    concurrent = Arrangement([(0, 1, 0), (0, 0, 1), (0, 1, 1)]).genericity_check()
    assert any("concurrent" in msg for msg in concurrent)


def test_face_count_examples():
    assert face_count(2, 2, 1) == 5
    assert face_count(2, 2, 2) == 10
    assert face_count(3, 1, 1) == 5
    with pytest.raises(ValueError):
        face_count(1, 1, 2)


def test_triangle_faces():
    arr = Arrangement(TRIANGLE)
    assert len(arr.enumerate_faces(1)) == 4
    verts = arr.enumerate_faces(2)
    assert len(verts) == 6
    assert sum(v.at_infinity for v in verts) == 3
    assert {v.affine_point() for v in verts if not v.at_infinity} == {(0, 0), (0, 1), (1, 0)}
    with pytest.raises(GenericityViolation):
        Arrangement([(0, 1, 0), (0, 0, 1), (0, 1, 1)]).enumerate_faces(2)


def test_chambers_examples():
    line = Arrangement([(0, 1), (-1, 1)])
    ch = line.chambers()
    assert len(ch) == 3
    assert sum(c.sample[0] < 0 for c in ch) == 1
    assert sum(c.bounded for c in ch) == 1
    assert len(Arrangement(TRIANGLE).chambers()) == 7
    assert sum(c.bounded for c in Arrangement(TRIANGLE).chambers()) == 1
    assert len(random_lines(5, 0).chambers()) == 16


def test_incident_chambers_small():
    arr = Arrangement(TRIANGLE)
    origin = next(f for f in arr.enumerate_faces(2) if f.hyperplanes == (0, 1))
    assert len({c.signs for c in arr.incident_chambers(origin)}) == 4
    side = arr.enumerate_faces(1)[0]
    assert len({c.signs for c in arr.incident_chambers(side)}) == 2
    line = Arrangement([(0, 1), (-1, 1)])
    zero = line.enumerate_faces(1)[0]
    assert len({c.signs for c in line.incident_chambers(zero)}) == 2


@pytest.mark.parametrize("m", range(2, 9))
def test_generic_counts(m):
    arr = random_lines(m, m)
    ch = arr.chambers()
    assert len(ch) == 1 + m + comb(m, 2) == generic_chamber_count(m, 2)
    assert len({c.signs for c in ch}) == len(ch)
    for c in ch:
        assert all(s != 0 for s in arr.sign_vector(c.sample))
        assert arr.sign_vector(c.sample) == c.signs
    n = m - 2
    for j in (1, 2):
        faces = arr.enumerate_faces(j)
        assert len(faces) == face_count(n, 2, j)
        for f in faces:
            assert len({c.signs for c in arr.incident_chambers(f)}) == 2 ** j


@given(st.integers(0, 10_000), st.integers(1, 6))
def test_k1_chambers(seed, m):
    rng = random.Random(seed)
    roots = rng.sample(range(-50, 50), m)
    arr = Arrangement([(-r, 1) for r in roots])
    assert len(arr.chambers()) == m + 1
    assert len(arr.enumerate_faces(1)) == m + 1  # the roots plus infinity
    assert arr.labels()[-1] == INFINITY
