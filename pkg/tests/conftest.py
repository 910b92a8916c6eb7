import os
import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_acceptance = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_acceptance] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_acceptance, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


class Criterion:
    """Times one acceptance criterion and collects its failures.

    Used as a context manager; on exit one PASS/FAIL line is recorded for
    the end-of-run summary. Exceptions count as failures and propagate.
    """

    def __init__(self, sink, number, title, limit=None):
        self.sink, self.number, self.title, self.limit = sink, number, title, limit
        self.failures = []
        self.notes = []

    def check(self, ok, msg):
        if not ok:
            self.failures.append(msg)

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if self.limit is not None and elapsed >= self.limit:
            self.failures.append(f"took {elapsed:.1f}s, limit {self.limit}s")
        status = "FAIL" if self.failures else "PASS"
        detail = "; ".join(self.notes + self.failures[:3])
        self.sink.append(f"criterion {self.number} {status}  {self.title}  [{elapsed:.1f}s]  {detail}")
        return False


@pytest.fixture
def criterion(request):
    sink = request.config.stash[_acceptance]
    return lambda number, title, limit=None: Criterion(sink, number, title, limit)
