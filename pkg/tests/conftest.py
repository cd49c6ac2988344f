import itertools

import pytest
from hypothesis import strategies as st


def perms(max_n=10, min_n=1):
    return st.integers(min_n, max_n).flatmap(lambda n: st.permutations(range(1, n + 1)))


def all_perms(n):
    return itertools.permutations(range(1, n + 1))


_ACCEPTANCE: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(num, ok, detail):
        line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
