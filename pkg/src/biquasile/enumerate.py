"""Exhaustive enumeration of finite biquasiles by backtracking.

Both tables are filled one cell at a time.  Row and column bitmasks keep
every partial table Latin, and after each assignment all axiom instances
whose table lookups are already determined are evaluated; a violated
instance prunes the branch.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import FiniteBiquasile


class BudgetExceeded(RuntimeError):
    """Search stopped early.  ``found`` holds the structures seen so far."""

    def __init__(self, message, found, nodes, elapsed):
        super().__init__(message)
        self.found = found
        self.nodes = nodes
        self.elapsed = elapsed


@dataclass
class SearchStats:
    nodes: int = 0
    pruned: int = 0
    started: float = field(default_factory=time.perf_counter)


def _cell_order(n):
    # Whole dot table first, row by row: fixing the products a.b early
    # makes many star lookups in the axioms determined sooner.
    return [(t, i, j) for t in (1, 0) for i in range(n) for j in range(n)]


class _PartialChecker:
    """Evaluates both axioms on partial tables.

    Unknown entries hold the sentinel ``n``; the padded tables map any
    operand equal to ``n`` to ``n`` again, so undetermined subterms
    propagate as unknown.
    """

    def __init__(self, n):
        self.n = n
        grids = np.meshgrid(*([np.arange(n)] * 4), indexing="ij")
        self.a, self.b, self.x, self.y = (g.ravel() for g in grids)

    def consistent(self, S, D):
        n = self.n
        a, b, x, y = self.a, self.b, self.x, self.y
        ab = D[a, b]
        xy = D[x, y]
        y_ab = S[y, ab]
        a_xy = S[a, xy]
        lhs1 = S[a, D[x, y_ab]]
        rhs1 = S[a_xy, D[x, S[y, D[a_xy, b]]]]
        if np.any((lhs1 != rhs1) & (lhs1 != n) & (rhs1 != n)):
            return False
        lhs2 = S[y, D[a_xy, b]]
        rhs2 = S[y_ab, D[S[a, D[x, y_ab]], b]]
        return not np.any((lhs2 != rhs2) & (lhs2 != n) & (rhs2 != n))


def _search(n, prefix, budget_nodes, deadline, stats):
    checker = _PartialChecker(n)
    tables = [np.full((n + 1, n + 1), n, dtype=np.int64) for _ in range(2)]
    full = (1 << n) - 1
    rows = [[0] * n for _ in range(2)]
    cols = [[0] * n for _ in range(2)]
    cells = _cell_order(n)
    found = []

    def place(t, i, j, v):
        tables[t][i, j] = v
        rows[t][i] |= 1 << v
        cols[t][j] |= 1 << v

    def unplace(t, i, j, v):
        tables[t][i, j] = n
        rows[t][i] &= ~(1 << v)
        cols[t][j] &= ~(1 << v)

    for (t, i, j), v in zip(cells, prefix):
        if (rows[t][i] | cols[t][j]) >> v & 1:
            return found
        place(t, i, j, v)
    if not checker.consistent(tables[0], tables[1]):
        return found

    def rec(k):
        stats.nodes += 1
        if budget_nodes is not None and stats.nodes > budget_nodes:
            raise BudgetExceeded("node budget exhausted", found, stats.nodes,
                                 time.perf_counter() - stats.started)
        if deadline is not None and stats.nodes % 256 == 0 and time.perf_counter() > deadline:
            raise BudgetExceeded("time budget exhausted", found, stats.nodes,
                                 time.perf_counter() - stats.started)
        if k == len(cells):
            S = tables[0][:n, :n] + 1
            D = tables[1][:n, :n] + 1
            found.append(FiniteBiquasile(tuple(map(tuple, S.tolist())), tuple(map(tuple, D.tolist()))))
            return
        t, i, j = cells[k]
        free = full & ~(rows[t][i] | cols[t][j])
        while free:
            low = free & -free
            v = low.bit_length() - 1
            free ^= low
            place(t, i, j, v)
            if checker.consistent(tables[0], tables[1]):
                rec(k + 1)
            else:
                stats.pruned += 1
            unplace(t, i, j, v)

    rec(len(prefix))
    return found


def _prefixes(n, depth):
    """All Latin-consistent value assignments to the first ``depth`` cells."""
    cells = _cell_order(n)[:depth]
    out = []

    def rec(k, acc, rows, cols):
        if k == depth:
            out.append(tuple(acc))
            return
        t, i, j = cells[k]
        for v in range(n):
            if (rows[t, i] | cols[t, j]) >> v & 1:
                continue
            rows[t, i] |= 1 << v
            cols[t, j] |= 1 << v
            rec(k + 1, acc + [v], rows, cols)
            rows[t, i] &= ~(1 << v)
            cols[t, j] &= ~(1 << v)

    rec(0, [], np.zeros((2, n), dtype=np.int64), np.zeros((2, n), dtype=np.int64))
    return out


def _run_prefix(args):
    n, prefix = args
    return [X.key() for X in _search(n, prefix, None, None, SearchStats())]


def enumerate_biquasiles(n: int, *, max_nodes: int | None = None, max_seconds: float | None = None,
                         allow_large: bool = False, jobs: int = 1) -> list[FiniteBiquasile]:
    """Every biquasile structure on ``{1..n}``, sorted by table contents.

    Orders above 4 require ``allow_large=True`` or an explicit budget.
    On budget exhaustion a :class:`BudgetExceeded` is raised carrying the
    structures found so far.  ``jobs > 1`` splits the search tree by its
    first cells across worker processes (no budget in that mode).
    """
    if n < 1:
        raise ValueError("order must be positive")
    if n > 4 and not (allow_large or max_nodes or max_seconds):
        raise ValueError(f"order {n} needs allow_large=True or a budget")
    if jobs > 1 and n > 2:
        tasks = [(n, p) for p in _prefixes(n, 2)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            keys = [k for chunk in pool.map(_run_prefix, tasks) for k in chunk]
        return [_from_key(n, k) for k in sorted(keys)]
    stats = SearchStats()
    deadline = None if max_seconds is None else stats.started + max_seconds
    try:
        found = _search(n, (), max_nodes, deadline, stats)
    except BudgetExceeded as exc:
        exc.found = sorted(exc.found, key=FiniteBiquasile.key)
        raise
    return sorted(found, key=FiniteBiquasile.key)


def _from_key(n, key):
    flat = [key[i:i + n] for i in range(0, 2 * n * n, n)]
    return FiniteBiquasile(tuple(flat[:n]), tuple(flat[n:]))
