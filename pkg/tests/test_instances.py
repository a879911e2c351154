import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fewnomial.errors import InstanceFormatError, SamplingExhausted
from fewnomial.instances import (
    dumps,
    fraction_str,
    loads,
    parse_fraction,
    random_instance,
    random_trinomial,
    read_instance,
    write_instance,
)
from fewnomial.lattice import span_index_parity


def test_fraction_strings():
    assert fraction_str(Fraction(-3, 4)) == "-3/4"
    assert fraction_str(Fraction(2)) == "2/1"
    assert parse_fraction("6/8") == Fraction(3, 4)
    assert parse_fraction(5) == 5
    for bad in (0.5, "x", "1/0", None):
        with pytest.raises(InstanceFormatError):
            parse_fraction(bad)


def test_malformed_files():
    with pytest.raises(InstanceFormatError):
        loads("{not json")
    with pytest.raises(InstanceFormatError):
        loads(json.dumps({"n": 1, "k": 1, "exponents": [[0], [1]], "coefficients": [["1/1", "1/1"]]}))
    with pytest.raises(InstanceFormatError):
        loads(json.dumps({"n": 1, "k": 1, "exponents": [[0], [1], [2]]}))
    with pytest.raises(InstanceFormatError):
        loads(json.dumps({"n": 1, "k": 1, "exponents": [[0], [1], [1]], "coefficients": [["1/1", "1/1", "1/1"]]}))


def test_untranslated_exponents_survive(tmp_path):
    text = json.dumps({"n": 1, "k": 1, "exponents": [[2], [4], [5]], "coefficients": [["1/2", "-3/1", "1/1"]]})
    sys = loads(text)
    assert sys.support.vectors == ((0,), (2,), (3,))
    path = tmp_path / "i.json"
    write_instance(path, sys)
    assert json.loads(path.read_text())["exponents"] == [[2], [4], [5]]
    assert read_instance(path) == sys


@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)]))
def test_round_trip_identity(seed, nk):
    sys = random_instance(*nk, seed, exp_range=4)
    text = dumps(sys, {"seed": seed})
    assert dumps(loads(text), {"seed": seed}) == text
    assert loads(text) == sys


def test_random_determinism_and_postconditions():
    a = random_instance(1, 1, 7, exp_range=20)
    assert a == random_instance(1, 1, 7, exp_range=20)
    b = random_instance(2, 2, 7, exp_range=3)
    assert len(b.support.vectors) == 5 and span_index_parity(b.support).odd
    with pytest.raises(SamplingExhausted):
        random_instance(1, 1, 0, exp_range=8, exp_step=2)
    with pytest.raises(SamplingExhausted):
        random_instance(1, 3, 0, exp_range=2)


def test_random_trinomial_shape():
    rng = random.Random(0)
    for _ in range(200):
        sys = random_trinomial(rng)
        a, b = sys.support.vectors[1][0], sys.support.vectors[2][0]
        assert 1 <= a < b <= 20
        assert span_index_parity(sys.support).odd
