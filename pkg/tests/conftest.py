import os

import pytest

from coprime_census.arith import build_sieve

# worker lanes for the heavy permanents; results are thread-count
# independent (asserted by the determinism tests)
THREADS = min(os.cpu_count() or 1, 4)


@pytest.fixture(scope="session")
def sieve_1m():
    return build_sieve(10**6)


@pytest.fixture(scope="session")
def sieve_small():
    return build_sieve(10**4)
