import pytest

from shlearn.oracle import GeneratorSource, build_corpus


@pytest.fixture(scope="session")
def small_corpus():
    return build_corpus(GeneratorSource(seed=7, budget=120), 120).records


_CRITERIA = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record a one-line PASS/FAIL verdict, printed in the terminal summary."""
    log = request.config.stash.setdefault(_CRITERIA, [])

    def report(label, ok, detail):
        log.append(f"{label}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
