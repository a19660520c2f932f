import functools
import sys

import pytest

from rtlcheck.models.catalog import builtin, to_ltsc


@functools.lru_cache(maxsize=None)
def _built(name):
    return to_ltsc(builtin(name))


@pytest.fixture(scope="session")
def ltsc():
    """Explored built-in models, shared across the session."""
    return _built


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        checks = acceptance.RESULTS[n]
        bad = [what for what, ok in checks if not ok]
        line = "criterion %2d: %s (%d/%d checks)" % (n, "FAIL" if bad else "PASS", len(checks) - len(bad), len(checks))
        if bad:
            line += "; failed: " + "; ".join(bad)
        terminalreporter.write_line(line)
