import pytest

ACCEPTANCE = {}


@pytest.fixture
def record():
    def _record(n, ok, detail=""):
        prev = ACCEPTANCE.get(n)
        if prev is not None:
            ok = ok and prev[0]
            detail = "; ".join(x for x in (prev[1], detail) if x)
        ACCEPTANCE[n] = (ok, detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
