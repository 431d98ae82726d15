import numpy as np
import pytest

from citepaths import _backend
from citepaths.fixtures import load_fixture

BACKENDS = ["numpy"] + (["cython"] if _backend.name == "cython" else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    if request.param == "numpy":
        monkeypatch.setattr(_backend, "kernels", _backend.fallback)
    return request.param


@pytest.fixture
def fig1a():
    return load_fixture("fig1a")


@pytest.fixture
def fig1b():
    return load_fixture("fig1b")


@pytest.fixture
def fig2a():
    return load_fixture("fig2a")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def brute_force_2paths(src, dst):
    """Count pairs of edges (a->b), (b->c) by enumerating all edge pairs."""
    count = 0
    for b1 in dst:
        for a2 in src:
            if b1 == a2:
                count += 1
    return count


def pytest_configure(config):
    config.addinivalue_line("markers", "budget(seconds): runtime budget of a criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
