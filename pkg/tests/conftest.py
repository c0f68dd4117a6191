import pytest
from hypothesis import HealthCheck, settings

# fixed-seed randomized testing: same examples on every run
settings.register_profile("fixed", derandomize=True, deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("fixed")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_acceptance():
    def record(number: int, passed: bool, detail: str, seconds: float):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}  [{seconds:.2f} s]"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
