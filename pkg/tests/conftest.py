import pytest

from intlab import demo_model_path, load_model

import acceptance_log


@pytest.fixture(scope="session")
def fourworld():
    return load_model(demo_model_path("fourworld"))


@pytest.fixture(scope="session")
def twosort():
    return load_model(demo_model_path("twosort"))


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance_log.RESULTS):
        status, title = acceptance_log.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d} {status}  {title}")
