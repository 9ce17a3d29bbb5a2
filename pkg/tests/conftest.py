import random

import pytest

from groundkit import Digraph
from groundkit.synthetic import random_digraph


def labeled(arcs, vertices=()):
    return Digraph.from_arcs([(str(a), str(b)) for a, b in arcs], [str(v) for v in vertices])


def label_view(g):
    """(labels, label arcs) for feeding the independent oracle."""
    return set(g.labels()), g.label_arcs()


def random_family(count, n_max=10, densities=(0.1, 0.2, 0.3), seed=0):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_digraph(rng.randint(1, n_max), rng.choice(densities), seed=rng.randrange(2**32))


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            for key, value in rep.user_properties:
                if key == "criterion":
                    lines.append(value)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
