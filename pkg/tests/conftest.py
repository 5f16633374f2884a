import pytest

from acceptance_log import RESULTS, summary_lines
from wavespec.profiles import WaveFamily


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in summary_lines():
            terminalreporter.write_line(line)


@pytest.fixture(params=list(WaveFamily), ids=lambda f: f.value)
def family(request):
    return request.param
