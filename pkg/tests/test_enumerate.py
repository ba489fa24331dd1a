import itertools

import pytest

from biquasile.algebra import FiniteBiquasile, check_axioms, check_axioms_fg, is_latin, iso_classes
from biquasile.enumerate import BudgetExceeded, enumerate_biquasiles


def latin_pair_oracle(n):
    """Every Latin pair filtered by the f/g form of the axioms."""
    squares = [sq for sq in itertools.product(itertools.permutations(range(1, n + 1)), repeat=n)
               if is_latin(sq)]
    out = []
    for S, D in itertools.product(squares, repeat=2):
        X = FiniteBiquasile(S, D)
        if check_axioms_fg(X):
            out.append(X)
    return sorted(out, key=FiniteBiquasile.key)


@pytest.mark.parametrize("n,count,classes", [(1, 1, 1), (2, 4, 2), (3, 72, 19)])
def test_small_counts(n, count, classes):
    found = enumerate_biquasiles(n)
    assert len(found) == count
    assert len(iso_classes(found)) == classes


def test_order_two_list(order_two):
    assert set(enumerate_biquasiles(2)) == set(order_two.values())


@pytest.mark.parametrize("n", [2, 3])
def test_matches_exhaustive_oracle(n):
    assert enumerate_biquasiles(n) == latin_pair_oracle(n)


def test_output_is_sorted_and_valid(order3):
    assert order3 == sorted(order3, key=FiniteBiquasile.key)
    assert len(set(order3)) == len(order3)
    for X in order3:
        assert is_latin(X.star) and is_latin(X.dot)
        assert check_axioms(X)


def test_parallel_run_matches_serial(order3):
    assert enumerate_biquasiles(3, jobs=2) == order3


def test_node_budget_gives_partial_result():
    with pytest.raises(BudgetExceeded) as info:
        enumerate_biquasiles(3, max_nodes=50)
    exc = info.value
    assert exc.nodes > 50
    assert all(check_axioms(X) for X in exc.found)
    assert len(exc.found) < 72


def test_large_orders_need_explicit_permission():
    with pytest.raises(ValueError):
        enumerate_biquasiles(5)
    with pytest.raises(ValueError):
        enumerate_biquasiles(0)


def test_order_five_runs_under_a_time_budget():
    with pytest.raises(BudgetExceeded) as info:
        enumerate_biquasiles(5, max_seconds=0.5)
    assert all(X.order == 5 and check_axioms(X) for X in info.value.found)
