import pytest

from coase import Allocation, load_scenario
from coase.kernels import backends


def alloc(e, *holdings):
    """Allocation from per-agent lists of resource names."""
    return Allocation(tuple(e.resources.bundle(h) for h in holdings), e.m)


@pytest.fixture
def paper():
    return load_scenario("paper_thm44.json")


@pytest.fixture
def paper_economy(paper):
    return paper.economy


@pytest.fixture
def e1():
    return load_scenario("invariance_e1.json").economy


@pytest.fixture
def e2():
    return load_scenario("gift_e2.json").economy


@pytest.fixture(scope="module", params=sorted(backends()))
def kernel(request):
    return backends()[request.param]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
