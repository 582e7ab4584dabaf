import itertools
import os


import numpy as np
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.register_profile("stress", deadline=None, max_examples=2000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def enumerate_runs(n, p):
    """(probability, longest run) for every one of the 2^n flag sequences."""
    for flags in itertools.product((0, 1), repeat=n):
        best = cur = 0
        for f in flags:
            cur = cur + 1 if f else 0
            best = max(best, cur)
        k = sum(flags)
        yield p**k * (1 - p) ** (n - k), best


def brute_cdf(n, p):
    pmf = np.zeros(n + 1)
    for prob, r in enumerate_runs(n, p):
        pmf[r] += prob
    return np.cumsum(pmf)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
