import time

import pytest

_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_KEY] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (number, title, limit_seconds) and use as a context manager."""
    log = request.config.stash[_KEY]

    class _Criterion:
        def __init__(self, number, title, limit):
            self.number, self.title, self.limit = number, title, limit

        def __enter__(self):
            self.start = time.perf_counter()
            return self

        def __exit__(self, exc_type, exc, tb):
            elapsed = time.perf_counter() - self.start
            ok = exc_type is None and elapsed <= self.limit
            line = f"criterion {self.number:>2}: {'PASS' if ok else 'FAIL'}  {self.title}  ({elapsed:.1f}s, limit {self.limit:g}s)"
            log.append((self.number, line))
            print(line)
            if exc_type is None and not ok:
                pytest.fail(f"criterion {self.number} exceeded its runtime limit: {elapsed:.1f}s")
            return False

    return _Criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_KEY, [])
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(log):
        terminalreporter.write_line(line)
