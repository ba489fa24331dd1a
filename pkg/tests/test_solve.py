import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from biquasile.alexander import AlexanderParams, enumerate_params, materialize
from biquasile.algebra import dehn_biquasile
from biquasile.diagram import dual_graph
from biquasile.solve import (BudgetExceeded, ColoringProblem, LinearSystem, brute_force_count,
                             count_colorings, count_solutions_mod_m, enumerate_colorings,
                             invariant_factors, phi_invariant, phi_linear, smith_normal_form)
from biquasile.tables import bundled_structure, knots, lookup
from biquasile.words import Gen, Presentation, fundamental_presentation, simplify

NINE_TRIPLES = {(1, 1, 1), (1, 2, 3), (1, 3, 2), (2, 1, 2), (2, 2, 1), (2, 3, 3),
                (3, 1, 3), (3, 2, 2), (3, 3, 1)}


def problem(name, X):
    return ColoringProblem(fundamental_presentation(dual_graph(lookup(name))), X)


def trefoil_triples(X):
    """Satisfying (y, a, b) of the one-relation trefoil presentation."""
    q = simplify(fundamental_presentation(dual_graph(lookup("3_1"))))
    (lhs, rhs), = q.relations
    pair = lhs.right
    y, b, a = rhs.name, pair.left.name, pair.right.name
    return {(c[y], c[a], c[b]) for c in enumerate_colorings(ColoringProblem(q, X))}


# -- generic engine -------------------------------------------------------------


def test_trefoil_nine_colorings(trefoil_example):
    assert count_colorings(problem("3_1", trefoil_example)) == 9
    triples = trefoil_triples(trefoil_example)
    assert triples == NINE_TRIPLES
    assert (1, 1, 2) not in triples


def test_unknot_counts_square(upto3):
    for X in upto3:
        assert count_colorings(problem("unknot", X)) == X.order ** 2


def test_trefoil_dehn_matches_brute_force():
    p = problem("3_1", dehn_biquasile(3))
    assert count_colorings(p) == brute_force_count(p)


def test_no_relations_gives_every_assignment(trefoil_example):
    p = ColoringProblem(Presentation(("u", "v", "w"), ()), trefoil_example)
    sols = enumerate_colorings(p)
    assert len(sols) == 27 and len({tuple(s.values()) for s in sols}) == 27


def test_figure_eight_alexander_assignments():
    X = materialize(AlexanderParams(3, 1, 1, 2))
    sols = enumerate_colorings(problem("4_1", X))
    assert len(sols) == 9
    assert phi_linear(lookup("4_1"), 3, 1, 1, 2) == 9


def test_enumeration_budget():
    X = bundled_structure("X1")
    with pytest.raises(BudgetExceeded):
        enumerate_colorings(problem("8_17", X), budget=3)


def test_counts_bounded(order3):
    for name in ("3_1", "4_1", "5_2"):
        regions = len(fundamental_presentation(dual_graph(lookup(name))).generators)
        for X in order3:
            assert count_colorings(problem(name, X)) <= X.order ** regions


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["3_1", "4_1", "5_1", "L2a1", "L4a1"]), st.integers(0, 71))
def test_generic_engine_matches_brute_force(order3, name, idx):
    p = problem(name, order3[idx])
    assert count_colorings(p) == brute_force_count(p)


SMALL = [n for n in knots() if knots()[n].n_crossings <= 6]


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_linear_and_generic_engines_agree(m):
    for p in enumerate_params(m):
        X = materialize(p)
        for name in SMALL:
            generic = phi_invariant(lookup(name), X)
            assert generic == phi_linear(lookup(name), m, p.d, p.n, p.s)
            # constant colorings on each checkerboard class always exist
            assert generic >= m ** 2


def test_order_five_anchors():
    X1, X2, X3 = (bundled_structure(k) for k in ("X1", "X2", "X3"))
    assert phi_invariant(lookup("7_2"), X1) == 125
    assert phi_invariant(lookup("4_1"), X2) == 125
    assert phi_invariant(lookup("8_18"), X2) == 125
    assert all(phi_invariant(knots()[n], X3) == 25 for n in knots())


# -- Smith normal form ----------------------------------------------------------------


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _check_snf(A):
    U, D, V = smith_normal_form(A)
    assert _matmul(_matmul(U, A), V) == D
    assert abs(sympy.Matrix(U).det()) == 1 and abs(sympy.Matrix(V).det()) == 1
    rows, cols = len(A), len(A[0])
    diag = [D[i][i] for i in range(min(rows, cols))]
    assert all(D[i][j] == 0 for i in range(rows) for j in range(cols) if i != j)
    assert all(d >= 0 for d in diag)
    for x, y in zip(diag, diag[1:]):
        assert (y % x == 0) if x else y == 0
    return diag


def test_snf_small_cases():
    assert _check_snf([[1, 0], [0, 1]]) == [1, 1]
    assert _check_snf([[2, 0], [0, 3]]) == [1, 6]
    assert _check_snf([[0, 0], [0, 0]]) == [0, 0]


def test_snf_of_figure_eight_matrix():
    A = [[0, 0, 1, 2, 2, 1], [0, 1, 0, 1, 2, 2], [2, 2, 1, 1, 0, 0], [2, 1, 2, 0, 0, 1]]
    diag = _check_snf(A)
    assert count_solutions_mod_m(LinearSystem.of(A, 3)) == 9
    assert len([d for d in diag if d % 3]) == 4


matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_against_sympy(A):
    diag = _check_snf(A)
    ref = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
    ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)))
    assert sorted(diag) == ref_diag


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.integers(1, 3).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 5), min_size=c, max_size=c), min_size=r, max_size=r))),
    st.integers(2, 6))
def test_solution_count_against_enumeration(A, m):
    import itertools
    cols = len(A[0])
    brute = sum(1 for x in itertools.product(range(m), repeat=cols)
                if all(sum(a * v for a, v in zip(row, x)) % m == 0 for row in A))
    assert count_solutions_mod_m(LinearSystem.of(A, m)) == brute


def test_count_trivial_systems():
    assert count_solutions_mod_m(LinearSystem.of([[0, 0, 0]], 4)) == 64
    assert count_solutions_mod_m(LinearSystem((), 5, 3)) == 125
    ident = [[int(i == j) for j in range(4)] for i in range(4)]
    assert count_solutions_mod_m(LinearSystem.of(ident, 7)) == 1


def test_invariant_factors_of_a_product():
    assert invariant_factors([[4, 0], [0, 6]]) == [2, 12]
    assert math.prod(invariant_factors([[2, 4], [6, 8]])) == 8
