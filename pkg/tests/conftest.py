import pytest

from repower import load_csv


@pytest.fixture(scope="session")
def records():
    return load_csv()


@pytest.fixture(scope="session")
def by_study(records):
    return {rec.study.split()[0]: rec for rec in records}
