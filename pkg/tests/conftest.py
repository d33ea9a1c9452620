import random

import pytest

from tml.fields import FieldTower, FiniteField


@pytest.fixture
def f2():
    return FiniteField(2)


@pytest.fixture
def f3():
    return FiniteField(3)


@pytest.fixture
def tower2(f2):
    return FieldTower(f2)


@pytest.fixture
def tower3(f3):
    return FieldTower(f3)


@pytest.fixture
def rng():
    return random.Random(20260819)
