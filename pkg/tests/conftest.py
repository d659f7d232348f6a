import pytest

# (criterion number, title, passed, detail) collected by the acceptance tests
CRITERIA = []


@pytest.fixture
def criterion():
    def record(number, title, ok, detail=""):
        CRITERIA.append((number, title, bool(ok), detail))
        assert ok, f"criterion {number} ({title}): {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(CRITERIA, key=lambda c: c[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
