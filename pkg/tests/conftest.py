import time

import pytest


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def criterion(request):
    """``with criterion(n, title, limit) as c: ...; c.ok = verdict`` records one
    pass/fail line, printed now and again in the terminal summary."""
    lines = request.config._acceptance_lines

    class Record:
        def __init__(self, n, title, limit=None):
            self.n, self.title, self.limit = n, title, limit
            self.ok = False
            self.note = ""

        def __enter__(self):
            self.t0 = time.perf_counter()
            return self

        def __exit__(self, exc_type, exc, tb):
            dt = time.perf_counter() - self.t0
            in_time = self.limit is None or dt < self.limit
            ok = self.ok and in_time and exc_type is None
            limit = f" (limit {self.limit:g} s)" if self.limit else ""
            note = f" [{self.note}]" if self.note else ""
            line = (f"criterion {self.n:2d} {'PASS' if ok else 'FAIL'}  {self.title}: "
                    f"{dt:.2f} s{limit}{note}")
            print(line)
            lines.append((self.n, line))
            if exc_type is None:
                assert in_time, line
                assert self.ok, line
            return False

    return Record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = sorted(config._acceptance_lines)
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in lines:
            terminalreporter.write_line(line)
