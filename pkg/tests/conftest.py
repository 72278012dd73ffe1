import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 97, 101, 257, 65537]
# no large power of two in p - 1, so products take the Karatsuba path
AWKWARD_PRIMES = [1000003, 2147483647]
BIG_PRIMES = [(29 << 57) + 1, (1 << 61) - 1]

primes = st.sampled_from(SMALL_PRIMES + AWKWARD_PRIMES + BIG_PRIMES)


@st.composite
def residues(draw, p, min_size=0, max_size=20):
    return draw(st.lists(st.integers(0, p - 1), min_size=min_size, max_size=max_size))


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
