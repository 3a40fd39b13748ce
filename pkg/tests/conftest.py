import pytest
from hypothesis import strategies as st

from selfnest.randgen import GenSpec, random_tree
from selfnest.tree import build, from_nested

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, passed: bool, detail: str = "") -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


nested_trees = st.recursive(st.just([]), lambda kids: st.lists(kids, max_size=4), max_leaves=25)
trees = nested_trees.map(from_nested)


def shuffled(t, rng):
    """Same tree with every child list permuted."""
    children = {v: list(t.children(v)) for v in t.nodes}
    for cs in children.values():
        rng.shuffle(cs)
    return build(children, t.root)


def corpus(count=1000, max_size=250, seed=7):
    """Fixed random trees with sizes cycling through 1..max_size."""
    return [random_tree(GenSpec(1 + (k * 37) % max_size, seed + k)) for k in range(count)]


@pytest.fixture(scope="session")
def random_corpus():
    return corpus()


@pytest.fixture(scope="session")
def default_benchmark():
    import time

    from selfnest.bench import run_benchmark

    t0 = time.perf_counter()
    records = run_benchmark()
    return records, time.perf_counter() - t0
