import pytest

_CRITERIA: dict[int, tuple[bool, str]] = {}


class CriterionLog:
    def record(self, k: int, ok: bool, summary: str) -> None:
        _CRITERIA[k] = (ok, summary)
        print(f"{'PASS' if ok else 'FAIL'} criterion {k}: {summary}")


@pytest.fixture(scope="session")
def criterion() -> CriterionLog:
    return CriterionLog()


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        ok, summary = _CRITERIA[k]
        terminalreporter.line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {summary}")
