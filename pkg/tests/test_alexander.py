import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biquasile.alexander import (AlexanderParams, LaurentMatrix, LaurentPoly, ParameterError,
                                 ScanRow, classify_params, diagram_matrix, enumerate_params,
                                 materialize, numeric_relation_row, scan_csv, specialize,
                                 symbolic_matrix, symbolic_relation_row)
from biquasile.algebra import check_axioms
from biquasile.diagram import CrossingRelation, crossing_relations, dual_graph
from biquasile.solve import (ColoringProblem, LinearSystem, count_colorings,
                             count_solutions_mod_m)
from biquasile.tables import knots, lookup
from biquasile.words import fundamental_presentation

# region order u, v, w, x, y, z; each entry (t, h, a, b) means h = t * (a . b)
FIGURE_EIGHT_EQUATIONS = [(3, 5, 4, 2), (5, 3, 4, 1), (2, 1, 3, 0), (1, 2, 5, 0)]
FIGURE_EIGHT_NUMERIC = [[0, 0, 1, 2, 2, 1], [0, 1, 0, 1, 2, 2], [2, 2, 1, 1, 0, 0], [2, 1, 2, 0, 0, 1]]
FIGURE_EIGHT_REDUCED = [[1, 1, 0, 1, 2, 1], [0, 1, 0, 1, 2, 2], [0, 0, 1, 2, 2, 1], [0, 0, 0, 1, 0, 2]]


def rref_mod_p(rows, p):
    A = [[v % p for v in r] for r in rows]
    lead = 0
    for c in range(len(A[0]) if A else 0):
        piv = next((i for i in range(lead, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[lead], A[piv] = A[piv], A[lead]
        inv = pow(A[lead][c], -1, p)
        A[lead] = [v * inv % p for v in A[lead]]
        for i in range(len(A)):
            if i != lead and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[lead])]
        lead += 1
    return [r for r in A if any(r)]


def equation_relations():
    return [CrossingRelation(t, h, a, b, 1, i) for i, (t, h, a, b) in enumerate(FIGURE_EIGHT_EQUATIONS)]


# -- parameters and materialization --------------------------------------------


def test_materialize_example():
    X = materialize(AlexanderParams(3, 1, 1, 2))
    for x, y in itertools.product(range(3), repeat=2):
        assert X.mul_star(x + 1, y + 1) == (x + y) % 3 + 1
        assert X.mul_dot(x + 1, y + 1) == (x + 2 * y) % 3 + 1
        assert X.rdiv_star(x + 1, y + 1) == (x + 2 * y) % 3 + 1


def test_star_coefficients_over_z3():
    listed = {(1, 1, 2): 1, (2, 1, 1): 1, (2, 2, 1): 1, (1, 1, 1): 2,
              (1, 2, 1): 2, (2, 1, 2): 2, (2, 2, 2): 2}
    for (d, n, s), v in listed.items():
        assert AlexanderParams(3, d, n, s).star_coefficient == v
    # the configuration missing from the listed seven
    assert AlexanderParams(3, 1, 2, 2).star_coefficient == 1


def test_order_two_configuration():
    (p,) = enumerate_params(2)
    assert (p.d, p.n, p.s) == (1, 1, 1)
    assert check_axioms(materialize(p))


@pytest.mark.parametrize("args", [(3, 0, 1, 1), (4, 2, 1, 1), (6, 1, 3, 1), (1, 1, 1, 1)])
def test_non_units_rejected(args):
    with pytest.raises(ParameterError):
        AlexanderParams(*args)


def _phi(m):
    return sum(1 for u in range(1, m + 1) if math.gcd(u, m) == 1)


@pytest.mark.parametrize("m", range(2, 13))
def test_configuration_count(m):
    assert len(enumerate_params(m)) == _phi(m) ** 3


@pytest.mark.parametrize("m", range(2, 8))
def test_materialized_structures_pass_axioms(m):
    assert all(check_axioms(materialize(p)) for p in enumerate_params(m))


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 30), st.data())
def test_f_and_g_closed_forms(m, data):
    us = [u for u in range(1, m) if math.gcd(u, m) == 1]
    d, n, s = (data.draw(st.sampled_from(us)) for _ in range(3))
    a, b, x, y = (data.draw(st.integers(0, m - 1)) for _ in range(4))
    p = AlexanderParams(m, d, n, s)
    star, dot = p.star, p.dot
    f = star(x, dot(a, star(b, dot(x, y))))
    f_shift = star(star(x, dot(a, b)), dot(a, star(b, dot(star(x, dot(a, b)), y))))
    assert f == f_shift == (d * n * a - n ** 3 * s ** 2 * d * b + s ** 2 * n ** 2 * y) % m
    g = star(y, dot(star(a, dot(x, y)), b))
    y2 = star(y, dot(a, b))
    g_shift = star(y2, dot(star(a, dot(x, y2)), b))
    assert g == g_shift == (-n ** 3 * d ** 2 * s * a + n * s * b + d ** 2 * n ** 2 * x) % m


# -- classification -------------------------------------------------------------


def _brute_classes(m):
    """Distinct least relabelled tables over all m! bijections."""
    perms = np.array(list(itertools.permutations(range(m))))
    inv = np.argsort(perms, axis=1)
    idx = np.arange(len(perms))[:, None, None]
    keys = set()
    for p in enumerate_params(m):
        X = materialize(p)
        S, D = np.array(X.star) - 1, np.array(X.dot) - 1
        rs = perms[idx, S[inv[:, :, None], inv[:, None, :]]].reshape(len(perms), -1)
        rd = perms[idx, D[inv[:, :, None], inv[:, None, :]]].reshape(len(perms), -1)
        keys.add(min(map(tuple, np.concatenate([rs, rd], axis=1).tolist())))
    return len(keys)


@pytest.mark.parametrize("m", range(2, 8))
def test_class_counts_match_bijection_oracle(m):
    assert len(classify_params(m)) == _brute_classes(m)


def test_class_counts_frozen():
    # every configuration gives its own isomorphism class for m <= 10
    got = [len(classify_params(m)) for m in range(2, 11)]
    assert got == [1, 8, 8, 64, 8, 216, 64, 216, 64]


def test_scan_csv_layout():
    text = scan_csv([ScanRow(2, 1, 1), ScanRow(3, 8, 8)])
    assert text == "m,configurations,non_isomorphic\n2,1,1\n3,8,8\n"


# -- Laurent polynomials ------------------------------------------------------------


def test_laurent_basics():
    d = LaurentPoly.monomial(d=1)
    s = LaurentPoly.monomial(s=1)
    n = LaurentPoly.monomial(n=1)
    p = -(d * s * n * n)
    assert p.terms == {(1, 1, 2): -1}
    assert str(p) == "-d*s*n^2"
    assert (p - p).is_zero()
    # monomials print in lexicographic exponent order
    assert str(LaurentPoly.monomial(3, d=-1) + 2) == "3*d^-1 + 2"
    assert LaurentPoly({(0, 0, 0): 0}).is_zero()
    inv = LaurentPoly.monomial(d=-1)
    assert d * inv == 1


def test_negative_exponent_uses_modular_inverse():
    p = LaurentPoly.monomial(1, d=-1, n=-2)
    assert p.evaluate_mod(7, 3, 1, 2) == pow(3, -1, 7) * pow(4, -1, 7) % 7
    with pytest.raises(ParameterError):
        p.evaluate_mod(6, 2, 1, 1)


polys = st.dictionaries(st.tuples(*[st.integers(-2, 3)] * 3), st.integers(-5, 5), max_size=4).map(LaurentPoly)


@settings(max_examples=150, deadline=None)
@given(polys, polys, st.sampled_from([5, 7, 9, 11]), st.data())
def test_evaluation_is_a_ring_homomorphism(p, q, m, data):
    d, s, n = (data.draw(st.sampled_from([u for u in range(1, m) if math.gcd(u, m) == 1]))
               for _ in range(3))
    ev = lambda r: r.evaluate_mod(m, d, s, n)  # noqa: E731
    assert ev(p + q) == (ev(p) + ev(q)) % m
    assert ev(p * q) == ev(p) * ev(q) % m
    assert ev(-p) == (-ev(p)) % m


@settings(max_examples=50, deadline=None)
@given(polys)
def test_laurent_json_round_trip(p):
    assert LaurentPoly.from_json(p.to_json()) == p


def test_matrix_json_round_trip():
    M = diagram_matrix(lookup("4_1"))
    text = M.to_json()
    assert LaurentMatrix.from_json(text) == M
    obj = json.loads(text)
    assert obj["variables"] == ["d", "s", "n"]
    assert obj["entries"][0][0] in ([], [[1, 1, 2, -1]], [[0, 0, 0, -1]], [[1, 0, 1, 1]], [[0, 1, 1, 1]])


# -- symbolic rows and specialization ------------------------------------------------


def test_degenerate_relation_merges_column():
    row = symbolic_relation_row(CrossingRelation(0, 0, 1, 2, 1), 3)
    assert row[0] == LaurentPoly({(1, 1, 2): -1, (0, 0, 0): -1})
    assert str(row[1]) == "d*n" and str(row[2]) == "s*n"


def test_unindexed_region_rejected():
    with pytest.raises(IndexError):
        symbolic_relation_row(CrossingRelation(0, 5, 1, 2, 1), 3)


def test_specialize_trivial_cases():
    assert specialize(LaurentMatrix.zeros(2, 3), AlexanderParams(5, 1, 2, 3)) == [[0] * 3] * 2
    M = diagram_matrix(lookup("3_1"))
    at_one = specialize(M, AlexanderParams(2, 1, 1, 1))
    assert at_one == [[sum(r.terms.values()) % 2 for r in row] for row in M.rows]


def test_figure_eight_equations_give_printed_matrix():
    M = symbolic_matrix(equation_relations(), 6)
    p = AlexanderParams(3, 1, 1, 2)
    numeric = specialize(M, p)
    # the first two equations are written with a right division, which
    # moves every term to the other side
    signs = [-1, -1, 1, 1]
    assert [[(sg * v) % 3 for v in r] for sg, r in zip(signs, numeric)] == FIGURE_EIGHT_NUMERIC
    assert rref_mod_p(numeric, 3) == rref_mod_p(FIGURE_EIGHT_REDUCED, 3)
    assert len(rref_mod_p(numeric, 3)) == 4


def test_bundled_figure_eight_matches_equations_up_to_naming():
    M = diagram_matrix(lookup("4_1"))
    target = symbolic_matrix(equation_relations(), 6)
    rows = sorted(map(repr, target.rows))
    found = False
    for perm in itertools.permutations(range(6)):
        relabelled = sorted(repr(tuple(r[perm[j]] for j in range(6))) for r in M.rows)
        if relabelled == rows:
            found = True
            break
    assert found


def test_bundled_figure_eight_specializes_row_equivalently():
    M = diagram_matrix(lookup("4_1"))
    numeric = specialize(M, AlexanderParams(3, 1, 1, 2))
    assert len(rref_mod_p(numeric, 3)) == 4
    assert count_solutions_mod_m(LinearSystem.of(numeric, 3)) == 9


def test_trefoil_matrix_shape_and_count():
    pd = lookup("3_1")
    M = diagram_matrix(pd)
    assert M.shape == (3, 5)
    p = AlexanderParams(3, 1, 1, 2)
    linear = count_solutions_mod_m(LinearSystem.of(specialize(M, p), 3))
    generic = count_colorings(ColoringProblem(fundamental_presentation(dual_graph(pd)), materialize(p)))
    assert linear == generic


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(knots().names())), st.sampled_from([3, 4, 5, 7, 8, 9]), st.data())
def test_symbolic_and_direct_rows_agree(name, m, data):
    us = [u for u in range(1, m) if math.gcd(u, m) == 1]
    p = AlexanderParams(m, *(data.draw(st.sampled_from(us)) for _ in range(3)))
    dgd = dual_graph(knots()[name])
    rels = crossing_relations(dgd)
    assert specialize(symbolic_matrix(rels, dgd.n_vertices), p) == \
        [numeric_relation_row(r, dgd.n_vertices, p) for r in rels]
