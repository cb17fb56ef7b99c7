import itertools

import numpy as np
import pytest

from rbp.instance import RbpInstance, parse_instance

LINE4_TEXT = """\
RBP 1
k 2
start 1
vertices 4
edge 1 2 1
edge 2 3 1
edge 3 4 1
requests 4 2 1 1 2 2 4 3 3 4 4
"""


def line(length, requests, k, start=0, lengths=None):
    """Path 0-1-...-(length-1); ``requests`` are 0-based vertex ids."""
    lengths = lengths or [1.0] * (length - 1)
    edges = tuple((v, v + 1, float(d)) for v, d in enumerate(lengths))
    return RbpInstance(length, edges, tuple(requests), k, start)


def star(leaves, requests, k, start=0, lengths=None):
    """Centre 0 with leaves 1..leaves."""
    lengths = lengths or [1.0] * leaves
    edges = tuple((0, v + 1, float(d)) for v, d in enumerate(lengths))
    return RbpInstance(leaves + 1, edges, tuple(requests), k, start)


@pytest.fixture
def line4_instance():
    return parse_instance(LINE4_TEXT)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def vertex_enumeration(c, G, h, upper):
    """min c.x over {G x >= h, 0 <= x <= upper} by trying every basis."""
    n = len(c)
    rows = [np.asarray(g, float) for g in G] + [np.eye(n)[i] for i in range(n)]
    rhs = list(h) + [0.0] * n
    for i in range(n):
        rows.append(-np.eye(n)[i])
        rhs.append(-upper[i])
    rows, rhs = np.array(rows), np.array(rhs)
    best = np.inf
    for pick in itertools.combinations(range(len(rows)), n):
        B = rows[list(pick)]
        if abs(np.linalg.det(B)) < 1e-12:
            continue
        x = np.linalg.solve(B, rhs[list(pick)])
        if np.all(rows @ x >= rhs - 1e-9):
            best = min(best, float(c @ x))
    return best


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
