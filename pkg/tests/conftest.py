import numpy as np
import pytest

from primerace import PsiSieve, bundled_table


@pytest.fixture(scope="session")
def zeros_1k():
    return bundled_table("zeros_1k.txt")


@pytest.fixture(scope="session")
def zeros_10k():
    return bundled_table(limit=10000)


@pytest.fixture(scope="session")
def zeros_full():
    return bundled_table()


@pytest.fixture(scope="session")
def sieve_200k():
    return PsiSieve(ceiling=200_000)
