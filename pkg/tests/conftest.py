import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    def _record(num: int, title: str, passed: bool, detail: str = ""):
        ACCEPTANCE[num] = (title, passed, detail)
        line = f"criterion {num:2d} [{'PASS' if passed else 'FAIL'}] {title}" + (f" ({detail})" if detail else "")
        print(line)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[num]
        terminalreporter.write_line(
            f"criterion {num:2d} [{'PASS' if passed else 'FAIL'}] {title}" + (f" ({detail})" if detail else "")
        )
