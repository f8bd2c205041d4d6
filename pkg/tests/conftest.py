from collections import defaultdict

import pytest
from hypothesis import settings

# fixed example streams keep the suite reproducible
settings.register_profile("default", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("default")

_RESULTS = defaultdict(list)


@pytest.fixture
def report():
    """Record one acceptance check: ``report(criterion, ok, detail)``."""
    def record(num, ok, detail=""):
        _RESULTS[num].append((bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_RESULTS):
        rows = _RESULTS[num]
        good = sum(ok for ok, _ in rows)
        verdict = "PASS" if good == len(rows) else "FAIL"
        tr.write_line(f"criterion {num}: {verdict} ({good}/{len(rows)} checks)")
        for ok, detail in rows:
            tr.write_line(f"    {'ok  ' if ok else 'FAIL'} {detail}")
