import functools

import numpy as np
import pytest

from aqc_entangle.algorithms import make_spec
from aqc_entangle.schedule import adiabatic_profile
from aqc_entangle.trace import run_trace, runtime_table


@functools.lru_cache(maxsize=None)
def profile(alg, n, initial="green", grid=20001, alpha=0):
    return adiabatic_profile(make_spec(alg, n, initial, alpha=alpha), grid)


@functools.lru_cache(maxsize=None)
def table(alg, n, presets=None):
    from aqc_entangle.output import reference_for

    if presets is None:
        presets = tuple(reference_for(alg, n)["unoptimized"])
    return runtime_table(alg, n, list(presets))


@functools.lru_cache(maxsize=None)
def trace(alg, n, initial="green"):
    return run_trace(make_spec(alg, n, initial), profile=profile(alg, n, initial))


def random_states(seed, count, dim):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(count, dim))
    return x / np.linalg.norm(x, axis=1)[:, None]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
