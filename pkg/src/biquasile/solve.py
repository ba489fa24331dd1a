"""Exact coloring counts.

Two engines: a generic backtracking solver for any finite biquasile and
presentation, and a linear one for Alexander structures that counts the
kernel of an integer matrix mod m through its Smith normal form.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .algebra import FiniteBiquasile
from .diagram import (DEFAULT_CONVENTION, Convention, CrossingRelation, OrientedPDCode,
                      crossing_relations, dual_graph)
from .words import Gen, Op, Presentation, Word, fundamental_presentation


class BudgetExceeded(RuntimeError):
    pass


# -- generic engine -------------------------------------------------------------

_OPCODE = {"*": 0, ".": 1, "/*": 2, "\\*": 3, "/": 4, "\\": 5}


class _Node:
    __slots__ = ("op", "left", "right", "gen", "gens")

    def __init__(self, op=-1, left=None, right=None, gen=-1):
        self.op, self.left, self.right, self.gen = op, left, right, gen
        self.gens = frozenset([gen]) if gen >= 0 else left.gens | right.gens


def _compile(w: Word, index: dict[str, int]) -> _Node:
    if isinstance(w, Gen):
        return _Node(gen=index[w.name])
    return _Node(_OPCODE[w.op], _compile(w.left, index), _compile(w.right, index))


def _count_gen(node, g):
    if node.gen >= 0:
        return int(node.gen == g)
    return _count_gen(node.left, g) + _count_gen(node.right, g)


class _Tables:
    def __init__(self, X: FiniteBiquasile):
        z = X.zero_indexed
        self.n = z.n
        self.ops = (z.star, z.dot, z.rdiv_star, z.ldiv_star, z.rdiv_dot, z.ldiv_dot)
        self.t = z

    def apply(self, op, u, v):
        return self.ops[op][u * self.n + v]

    def solve_left(self, op, value, right):
        # L with L op right == value
        z, n = self.t, self.n
        if op == 0:
            return z.rdiv_star[value * n + right]
        if op == 1:
            return z.rdiv_dot[value * n + right]
        if op == 2:
            return z.star[value * n + right]
        if op == 3:
            return z.rdiv_star[right * n + value]
        if op == 4:
            return z.dot[value * n + right]
        return z.rdiv_dot[right * n + value]

    def solve_right(self, op, left, value):
        z, n = self.t, self.n
        if op == 0:
            return z.ldiv_star[left * n + value]
        if op == 1:
            return z.ldiv_dot[left * n + value]
        if op == 2:
            return z.ldiv_star[value * n + left]
        if op == 3:
            return z.star[left * n + value]
        if op == 4:
            return z.ldiv_dot[value * n + left]
        return z.dot[left * n + value]


def _eval(node, env, T):
    if node.gen >= 0:
        return env[node.gen]
    return T.apply(node.op, _eval(node.left, env, T), _eval(node.right, env, T))


def _solve_for(node, value, env, T):
    """Descend to the single unassigned generator, inverting each operation."""
    while node.gen < 0:
        if any(env[g] < 0 for g in node.left.gens):
            value = T.solve_left(node.op, value, _eval(node.right, env, T))
            node = node.left
        else:
            value = T.solve_right(node.op, _eval(node.left, env, T), value)
            node = node.right
    return node.gen, value


@dataclass(frozen=True)
class ColoringProblem:
    presentation: Presentation
    structure: FiniteBiquasile


class _Engine:
    def __init__(self, problem: ColoringProblem):
        p = problem.presentation
        self.names = p.generators
        index = {g: i for i, g in enumerate(p.generators)}
        self.rels = []
        for lhs, rhs in p.relations:
            L, R = _compile(lhs, index), _compile(rhs, index)
            single = {g for g in L.gens | R.gens if _count_gen(L, g) + _count_gen(R, g) == 1}
            self.rels.append((L, R, L.gens | R.gens, frozenset(single)))
        self.T = _Tables(problem.structure)
        self.nodes = 0

    def propagate(self, env) -> bool:
        T = self.T
        changed = True
        while changed:
            changed = False
            for L, R, gens, single in self.rels:
                free = [g for g in gens if env[g] < 0]
                if not free:
                    if _eval(L, env, T) != _eval(R, env, T):
                        return False
                elif len(free) == 1 and free[0] in single:
                    g = free[0]
                    side, other = (L, R) if g in L.gens else (R, L)
                    g, v = _solve_for(side, _eval(other, env, T), env, T)
                    env[g] = v
                    changed = True
        return True

    def solutions(self, env=None, budget=None) -> Iterator[list[int]]:
        if env is None:
            env = [-1] * len(self.names)
        self.nodes += 1
        if budget is not None and self.nodes > budget:
            raise BudgetExceeded(f"more than {budget} search nodes")
        if not self.propagate(env):
            return
        try:
            g = env.index(-1)
        except ValueError:
            yield list(env)
            return
        for v in range(self.T.n):
            child = list(env)
            child[g] = v
            yield from self.solutions(child, budget)


def count_colorings(problem: ColoringProblem) -> int:
    """Exact number of colorings satisfying every relation."""
    return sum(1 for _ in _Engine(problem).solutions())


def enumerate_colorings(problem: ColoringProblem, budget: int | None = None) -> list[dict[str, int]]:
    """All colorings as ``{generator: element}`` with 1-indexed elements."""
    eng = _Engine(problem)
    return [{g: v + 1 for g, v in zip(eng.names, env)} for env in eng.solutions(budget=budget)]


def brute_force_count(problem: ColoringProblem) -> int:
    """Count by trying every assignment; exponential, for cross-checks only."""
    from .words import evaluate
    X = problem.structure
    p = problem.presentation
    count = 0
    for values in itertools.product(range(1, X.order + 1), repeat=len(p.generators)):
        env = dict(zip(p.generators, values))
        if all(evaluate(l, env, X) == evaluate(r, env, X) for l, r in p.relations):
            count += 1
    return count


# -- Smith normal form ------------------------------------------------------------


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """``(U, D, V)`` with ``U @ A @ V == D``, U and V unimodular.

    ``D`` is diagonal with non-negative entries and ``d_i | d_{i+1}``.
    Exact on Python integers.
    """
    D = [list(map(int, row)) for row in A]
    rows = len(D)
    cols = len(D[0]) if rows else 0
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        for M in (D, U):
            M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]

    def add_col(src, dst, k):
        for M in (D, V):
            for row in M:
                row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        while True:
            nonzero = [(abs(D[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if D[i][j]]
            if not nonzero:
                return U, D, V
            _, i, j = min(nonzero)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            done = True
            for i in range(t + 1, rows):
                q = D[i][t] // p
                if q:
                    add_row(t, i, -q)
                if D[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = D[t][j] // p
                if q:
                    add_col(t, j, -q)
                if D[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            U[t] = [-v for v in U[t]]
            D[t] = [-v for v in D[t]]
    return U, D, V


def invariant_factors(A: Sequence[Sequence[int]]) -> list[int]:
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


@dataclass(frozen=True)
class LinearSystem:
    matrix: tuple[tuple[int, ...], ...]
    modulus: int
    n_cols: int

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], m: int, n_cols: int | None = None) -> "LinearSystem":
        rows = tuple(tuple(int(v) % m for v in r) for r in rows)
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        return cls(rows, m, n_cols)


def count_solutions_mod_m(system: LinearSystem) -> int:
    """Number of ``x`` in ``Z_m^cols`` with ``A x == 0 (mod m)``."""
    m = system.modulus
    if not system.matrix:
        return m ** system.n_cols
    factors = [d for d in invariant_factors(system.matrix) if d]
    return m ** (system.n_cols - len(factors)) * math.prod(math.gcd(d, m) for d in factors)


def linear_system(relations: Sequence[CrossingRelation], n_regions: int,
                  m: int, d: int, n: int, s: int) -> LinearSystem:
    """Rows ``-dsn^2 t + nd a + ns b - h = 0`` for ``h = t * (a . b)``."""
    rows = []
    for rel in relations:
        t, h, a, b = rel.normalized()
        row = [0] * n_regions
        row[t] += -d * s * n * n
        row[a] += n * d
        row[b] += n * s
        row[h] -= 1
        rows.append(row)
    return LinearSystem.of(rows, m, n_regions)


# -- the invariant ------------------------------------------------------------------


def phi_invariant(pd: OrientedPDCode, X: FiniteBiquasile,
                  convention: Convention = DEFAULT_CONVENTION) -> int:
    """Number of X-colorings of the dual graph diagram of ``pd``."""
    dgd = dual_graph(pd)
    return count_colorings(ColoringProblem(fundamental_presentation(dgd, convention), X))


def phi_linear(pd: OrientedPDCode, m: int, d: int, n: int, s: int,
               convention: Convention = DEFAULT_CONVENTION) -> int:
    """The same count for the Alexander structure, via Smith normal form."""
    dgd = dual_graph(pd)
    rels = crossing_relations(dgd, convention)
    return count_solutions_mod_m(linear_system(rels, dgd.n_vertices, m, d, n, s))
