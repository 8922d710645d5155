import os

import pytest

from cantorspec import factorize, find_cycles, sieve_primitives

FULL_TIER = os.environ.get("CANTORSPEC_FULL") == "1"

ORACLE_BOUND = 10**5


@pytest.fixture(scope="session")
def desk_sieve():
    """The 10^6 sieve shared by the acceptance tests."""
    return sieve_primitives(10**6)


@pytest.fixture(scope="session")
def oracle_bundle():
    """Completeness and primitivity of every odd m <= 10^5, by the oracle.

    Primitivity here is the definition itself: incomplete with every
    proper divisor complete.  Proper divisors of in-range m are in range,
    so the map closes over itself.
    """
    complete = {}
    for m in range(1, ORACLE_BOUND + 1, 2):
        complete[m] = not find_cycles(m).cycles
    primitive = {}
    for m in range(1, ORACLE_BOUND + 1, 2):
        if complete[m]:
            primitive[m] = False
            continue
        primitive[m] = all(
            complete[d] for d in factorize(m).divisors() if 1 < d < m
        )
    return complete, primitive
