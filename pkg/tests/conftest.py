import pytest

from colocgraph.graph import build_graph
from helpers import fixture_a


@pytest.fixture
def dataset_a():
    return fixture_a()


@pytest.fixture
def graph_a(dataset_a):
    return build_graph(dataset_a, 0.3)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
