import itertools

import pytest

from biquasile.algebra import FiniteBiquasile
from biquasile.enumerate import enumerate_biquasiles
from biquasile.tables import bundled_structure


def block(rows):
    return FiniteBiquasile.from_block_matrix(rows)


def relabel(X: FiniteBiquasile, perm) -> FiniteBiquasile:
    """Image of ``X`` under the bijection ``x -> perm[x-1]`` (1-indexed)."""
    n = X.order
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p - 1] = i + 1

    def table(t):
        return tuple(tuple(perm[t[inv[i] - 1][inv[j] - 1] - 1] for j in range(n)) for i in range(n))

    return FiniteBiquasile(table(X.star), table(X.dot))


def brute_canonical_key(X: FiniteBiquasile):
    """Least relabelled table over all n! bijections."""
    return min(relabel(X, p).key() for p in itertools.permutations(range(1, X.order + 1)))


ORDER_TWO = {
    "X1": block([[1, 2, 1, 2], [2, 1, 2, 1]]),
    "X2": block([[1, 2, 2, 1], [2, 1, 1, 2]]),
    "X3": block([[2, 1, 1, 2], [1, 2, 2, 1]]),
    "X4": block([[2, 1, 2, 1], [1, 2, 1, 2]]),
}


@pytest.fixture(scope="session")
def order_two():
    return dict(ORDER_TWO)


@pytest.fixture(scope="session")
def trefoil_example():
    return bundled_structure("X69")


@pytest.fixture(scope="session")
def simple_example():
    return bundled_structure("simple3")


@pytest.fixture(scope="session")
def order3():
    return enumerate_biquasiles(3)


@pytest.fixture(scope="session")
def upto3(order3):
    return enumerate_biquasiles(1) + enumerate_biquasiles(2) + order3


_ACCEPTANCE = "test_acceptance.py"


def pytest_terminal_summary(terminalreporter):
    verdict = {}
    for outcome in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if _ACCEPTANCE not in nodeid or (outcome == "passed" and rep.when != "call"):
                continue
            name = nodeid.split("::")[-1]
            if not name.startswith("test_criterion_"):
                continue
            crit = int(name.split("_")[2])
            verdict[crit] = verdict.get(crit, True) and outcome == "passed"
    if verdict:
        terminalreporter.section("acceptance criteria")
        for crit in sorted(verdict):
            terminalreporter.write_line(f"criterion {crit}: {'PASS' if verdict[crit] else 'FAIL'}")
