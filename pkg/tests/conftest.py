import pytest

from heisen.kernels import available_backends, get_backend

_ACCEPTANCE_LINES = []


@pytest.fixture(params=available_backends())
def kernels(request):
    return get_backend(request.param)


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
