import numpy as np
import pytest

from seqdrift import OselmParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_params():
    return OselmParams(input_dim=8, hidden_dim=16, seed=3, ridge_lambda=0.01)


_CRITERIA = pytest.StashKey[dict]()


class CriterionRecorder:
    """Prints and remembers one PASS/FAIL/SKIP line per acceptance criterion."""

    def __init__(self, store: dict, number: int, title: str):
        self.store, self.number, self.title = store, number, title

    def _put(self, status: str, detail: str):
        line = f"[{status}] criterion {self.number:>2}: {self.title} | {detail}"
        self.store[self.number] = line
        print(line)

    def check(self, ok: bool, detail: str):
        self._put("PASS" if ok else "FAIL", detail)
        assert ok, detail

    def skip(self, reason: str):
        self._put("SKIP", reason)
        pytest.skip(reason)


@pytest.fixture
def criterion(request):
    store = request.config.stash.setdefault(_CRITERIA, {})
    marker = request.node.get_closest_marker("criterion")
    number, title = marker.args
    rec = CriterionRecorder(store, number, title)
    yield rec
    if number not in store:  # the test raised before reaching its verdict
        rec._put("FAIL", "error before verdict")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter, config):
    store = config.stash.get(_CRITERIA, {})
    if store:
        terminalreporter.section("acceptance criteria")
        for n in sorted(store):
            terminalreporter.write_line(store[n])
