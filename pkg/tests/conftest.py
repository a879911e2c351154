from fractions import Fraction

import pytest
from hypothesis import settings

from fewnomial.gale import SparseSystem

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


@pytest.fixture
def trinomial():
    """2 - 3x + x^3 = (x - 1)^2 (x + 2)."""
    return SparseSystem.from_data([[0], [1], [3]], [[2, -3, 1]])


@pytest.fixture
def perturbed_trinomial():
    return SparseSystem.from_data([[0], [1], [3]], [[Fraction(201, 100), -3, 1]])
