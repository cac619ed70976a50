import pytest

from kcliques.generators import complete_graph, hypercube, k6_minus_edge, random_graph, star_graph


@pytest.fixture
def k6me():
    """K6 minus {v3, v4}; input ids 1..6 stand for v1..v6."""
    return k6_minus_edge()


@pytest.fixture(scope="session")
def small_corpus():
    """40 mixed-density graphs for the (slower) property checks."""
    return [random_graph(5 + i % 14, 0.1 + 0.2 * (i % 5), 1000 + i) for i in range(40)]


NAMED = {
    "K3": lambda: complete_graph(3),
    "K4": lambda: complete_graph(4),
    "K6": lambda: complete_graph(6),
    "star5": lambda: star_graph(5),
    "Q3": lambda: hypercube(3),
    "Q4": lambda: hypercube(4),
    "k6-minus-edge": k6_minus_edge,
}


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """``criterion(n, ok, detail)`` records one acceptance line, printed in the summary."""

    def record(number: int, ok: bool, detail: str) -> None:
        _CRITERIA[number] = (bool(ok), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
