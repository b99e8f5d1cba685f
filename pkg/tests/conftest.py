import pytest

from gldl.ff_tower import FieldSpec, make_field


@pytest.fixture
def f4():
    return make_field(FieldSpec(2, 1, 2))


@pytest.fixture
def f2():
    return make_field(FieldSpec(2))
