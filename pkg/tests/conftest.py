import pytest

_LINES = []


class Recorder:
    def __call__(self, criterion: int, label: str, ok: bool, detail: str = "") -> bool:
        line = f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}  {label}"
        if detail:
            line += f"  ({detail})"
        _LINES.append(line)
        print(line)
        return ok


@pytest.fixture(scope="session")
def record():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
