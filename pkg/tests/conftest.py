import pytest

# criterion number -> list of (check name, passed, detail)
ACCEPTANCE = {}


@pytest.fixture
def record():
    """Record one acceptance check; the summary prints one line per criterion."""

    def _record(criterion: int, name: str, passed: bool, detail: str = ""):
        ACCEPTANCE.setdefault(criterion, []).append((name, bool(passed), detail))
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[crit]
        ok = all(p for _, p, _ in checks)
        failed = [f"{n} ({d})" for n, p, d in checks if not p]
        tail = "" if ok else "  failed: " + "; ".join(failed)
        terminalreporter.write_line(f"criterion {crit:2d}: {'PASS' if ok else 'FAIL'}{tail}")
