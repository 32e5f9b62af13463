from fractions import Fraction

import pytest

from mixedgoldbach import arith
from mixedgoldbach.gamma import GammaTables
from mixedgoldbach.special_primes import RationalExponent

C_11_10 = RationalExponent(11, 10)


@pytest.fixture(scope="session")
def c11():
    return C_11_10


@pytest.fixture(scope="session")
def primes_1e5():
    return arith.sieve_primes(100_000)


@pytest.fixture(scope="session")
def factorizer_1e5(primes_1e5):
    return arith.Factorizer(100_000, primes_1e5)


@pytest.fixture(scope="session")
def tables_small():
    """Small tables keep FFT round-off far below the oracle tolerances."""
    return GammaTables(2000, C_11_10)


@pytest.fixture(scope="session")
def tables_1e4():
    return GammaTables(10_000, C_11_10)


@pytest.fixture(scope="session")
def tables_1e5():
    return GammaTables(100_003, C_11_10)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, _line

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(RESULTS):
            terminalreporter.write_line(_line(RESULTS[cid]))
