import pytest

from ffdioph.ffield import FieldSpec


@pytest.fixture(scope="session")
def F2():
    return FieldSpec(2)


@pytest.fixture(scope="session")
def F3():
    return FieldSpec(3)


@pytest.fixture(scope="session")
def F4():
    return FieldSpec(2, 2)


@pytest.fixture(scope="session")
def small_fields():
    # every field with at most 9 elements
    return [FieldSpec(2), FieldSpec(3), FieldSpec(2, 2), FieldSpec(5), FieldSpec(7), FieldSpec(2, 3), FieldSpec(3, 2)]
