import pytest

from gcm3.search import PipelineConfig, run_pipeline

# acceptance lines collected by test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def default_run():
    return run_pipeline(PipelineConfig())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
