"""Finite biquasiles: operation tables, divisions, axioms, substructures.

Elements are the integers ``1..n``.  A structure is stored as two Latin
squares, ``star`` and ``dot``, where ``star[x-1][y-1] == x * y``.  The
text interchange format is the ``n x 2n`` block matrix (star block, then
dot block), one row per line.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class TableError(ValueError):
    """A table is malformed (wrong shape or entries out of range)."""


class StructureError(ValueError):
    """A table pair does not define the structure it claims to."""


Table = tuple[tuple[int, ...], ...]


def _as_table(rows: Iterable[Iterable[int]]) -> Table:
    table = tuple(tuple(int(v) for v in row) for row in rows)
    n = len(table)
    if n == 0:
        raise TableError("empty table")
    for row in table:
        if len(row) != n:
            raise TableError(f"table is not square: row of length {len(row)} in order {n}")
        for v in row:
            if not 1 <= v <= n:
                raise TableError(f"entry {v} outside 1..{n}")
    return table


def is_latin(table: Sequence[Sequence[int]]) -> bool:
    """True iff every row and every column is a permutation of ``1..n``.

    Raises :class:`TableError` for a malformed table, which is distinct
    from a well-formed table that simply is not Latin.
    """
    t = _as_table(table)
    full = set(range(1, len(t) + 1))
    return all(set(row) == full for row in t) and all(set(col) == full for col in zip(*t))


def _division_tables(t: Table) -> tuple[Table, Table]:
    """Left and right division tables of a Latin square.

    ``left[y][z]`` is the ``x`` with ``y op x == z``; ``right[z][y]`` is
    the ``x`` with ``x op y == z``.
    """
    n = len(t)
    left = [[0] * n for _ in range(n)]
    right = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            z = t[x][y] - 1
            left[x][z] = y + 1
            right[z][y] = x + 1
    return tuple(map(tuple, left)), tuple(map(tuple, right))


@dataclass(frozen=True)
class FiniteBiquasile:
    """A pair of quasigroup operations on ``{1..n}``.

    Construction validates the Latin property only; use
    :func:`check_axioms` to test the exchange axioms.
    """

    star: Table
    dot: Table

    def __post_init__(self):
        star = _as_table(self.star)
        dot = _as_table(self.dot)
        if len(star) != len(dot):
            raise TableError("star and dot tables have different orders")
        object.__setattr__(self, "star", star)
        object.__setattr__(self, "dot", dot)
        if not (is_latin(star) and is_latin(dot)):
            raise StructureError("operation tables must be Latin squares")

    @property
    def order(self) -> int:
        return len(self.star)

    def __len__(self):
        return self.order

    @classmethod
    def from_block_matrix(cls, rows: Sequence[Sequence[int]]) -> "FiniteBiquasile":
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != 2 * n for r in rows):
            raise TableError(f"block matrix of order {n} needs rows of length {2 * n}")
        return cls(tuple(tuple(r[:n]) for r in rows), tuple(tuple(r[n:]) for r in rows))

    def block_matrix(self) -> list[list[int]]:
        return [list(s) + list(d) for s, d in zip(self.star, self.dot)]

    def to_text(self) -> str:
        width = len(str(self.order))
        return "\n".join(" ".join(f"{v:>{width}}" for v in row) for row in self.block_matrix())

    def key(self) -> tuple[int, ...]:
        """Flat star||dot tuple, used for deterministic ordering."""
        return tuple(itertools.chain(*self.star, *self.dot))

    # -- operations, 1-indexed ------------------------------------------------

    def mul_star(self, x: int, y: int) -> int:
        return self.star[x - 1][y - 1]

    def mul_dot(self, x: int, y: int) -> int:
        return self.dot[x - 1][y - 1]

    @cached_property
    def _divs(self) -> tuple[Table, Table, Table, Table]:
        ls, rs = _division_tables(self.star)
        ld, rd = _division_tables(self.dot)
        return ls, rs, ld, rd

    def ldiv_star(self, y: int, z: int) -> int:
        """``y \\* z``: the x with ``y * x == z``."""
        return self._divs[0][y - 1][z - 1]

    def rdiv_star(self, z: int, y: int) -> int:
        """``z /* y``: the x with ``x * y == z``."""
        return self._divs[1][z - 1][y - 1]

    def ldiv_dot(self, y: int, z: int) -> int:
        return self._divs[2][y - 1][z - 1]

    def rdiv_dot(self, z: int, y: int) -> int:
        return self._divs[3][z - 1][y - 1]

    @cached_property
    def zero_indexed(self) -> "ZeroIndexed":
        return ZeroIndexed.from_structure(self)


@dataclass(frozen=True)
class ZeroIndexed:
    """Flat 0-indexed tables for the inner loops of solvers.

    Each attribute is a list of length ``n*n`` addressed as ``t[x*n + y]``.
    """

    n: int
    star: list
    dot: list
    ldiv_star: list
    rdiv_star: list
    ldiv_dot: list
    rdiv_dot: list

    @classmethod
    def from_structure(cls, X: FiniteBiquasile) -> "ZeroIndexed":
        def flat(t):
            return [v - 1 for row in t for v in row]

        ls, rs, ld, rd = X._divs
        return cls(X.order, flat(X.star), flat(X.dot), flat(ls), flat(rs), flat(ld), flat(rd))


def divisions(X: FiniteBiquasile) -> dict[str, Table]:
    """The four division tables of ``X``.

    Keys are ``'ldiv_star'`` (``y \\* z``), ``'rdiv_star'`` (``z /* y``),
    ``'ldiv_dot'`` and ``'rdiv_dot'``; each table is indexed by its two
    operands in written order.
    """
    ls, rs, ld, rd = X._divs
    return {"ldiv_star": ls, "rdiv_star": rs, "ldiv_dot": ld, "rdiv_dot": rd}


# -- axioms -----------------------------------------------------------------


def _axiom_arrays(n):
    a, b, x, y = (g.ravel() for g in np.meshgrid(*([np.arange(n)] * 4), indexing="ij"))
    return a, b, x, y


def _tables(X: FiniteBiquasile):
    return np.array(X.star) - 1, np.array(X.dot) - 1


def check_axioms(X: FiniteBiquasile) -> bool:
    """Both exchange axioms, evaluated literally on all ``n**4`` quadruples."""
    S, D = _tables(X)
    a, b, x, y = _axiom_arrays(X.order)
    ab = D[a, b]
    xy = D[x, y]
    y_ab = S[y, ab]
    a_xy = S[a, xy]
    lhs1 = S[a, D[x, y_ab]]
    rhs1 = S[a_xy, D[x, S[y, D[a_xy, b]]]]
    if not np.array_equal(lhs1, rhs1):
        return False
    lhs2 = S[y, D[a_xy, b]]
    rhs2 = S[y_ab, D[S[a, D[x, y_ab]], b]]
    return bool(np.array_equal(lhs2, rhs2))


def check_axioms_fg(X: FiniteBiquasile) -> bool:
    """The same axioms through the two-variable functions f and g.

    ``f_ab(x, y) = x * (a . (b * (x . y)))`` must be unchanged when x is
    replaced by ``x * (a . b)``; ``g_ab(x, y) = y * ((a * (x . y)) . b)``
    must be unchanged when y is replaced by ``y * (a . b)``.
    Written as plain loops so it shares no code with :func:`check_axioms`.
    """
    n = X.order
    s = X.mul_star
    d = X.mul_dot

    def f(a, b, x, y):
        return s(x, d(a, s(b, d(x, y))))

    def g(a, b, x, y):
        return s(y, d(s(a, d(x, y)), b))

    R = range(1, n + 1)
    for a, b in itertools.product(R, R):
        ab = d(a, b)
        for x, y in itertools.product(R, R):
            if f(a, b, x, y) != f(a, b, s(x, ab), y):
                return False
            if g(a, b, x, y) != g(a, b, x, s(y, ab)):
                return False
    return True


def is_biquasile(X: FiniteBiquasile) -> bool:
    return check_axioms(X)


# -- homomorphisms and isomorphism ------------------------------------------


@dataclass(frozen=True)
class BiquasileMap:
    """A map ``source -> target`` given as ``mapping[x-1] = f(x)``."""

    source: FiniteBiquasile
    target: FiniteBiquasile
    mapping: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.mapping[x - 1]

    def is_homomorphism(self) -> bool:
        f = self.mapping
        S, T = self.source, self.target
        R = range(1, S.order + 1)
        return all(
            f[S.mul_star(x, y) - 1] == T.mul_star(f[x - 1], f[y - 1])
            and f[S.mul_dot(x, y) - 1] == T.mul_dot(f[x - 1], f[y - 1])
            for x in R
            for y in R
        )

    def is_isomorphism(self) -> bool:
        return sorted(self.mapping) == list(range(1, self.target.order + 1)) and self.is_homomorphism()


def _generation_orders(X: FiniteBiquasile):
    """Yield every element ordering produced by seeded closure.

    Starting from a seed, elements are numbered in the order they first
    appear as products of already-numbered elements.  When the closure
    stalls, every unnumbered element is tried as the next seed.  The set
    of orderings is carried onto itself by any isomorphism, which makes
    the minimum relabelled table a canonical form.
    """
    n = X.order
    S = [[v - 1 for v in row] for row in X.star]
    D = [[v - 1 for v in row] for row in X.dot]

    def extend(order, pos):
        seen = set(order)
        order = list(order)
        k = pos
        while k < len(order):
            ek = order[k]
            for i in range(k + 1):
                ei = order[i]
                for z in (S[ei][ek], S[ek][ei], D[ei][ek], D[ek][ei]):
                    if z not in seen:
                        seen.add(z)
                        order.append(z)
            k += 1
        return order

    def rec(order):
        if len(order) == n:
            yield order
            return
        placed = set(order)
        for seed in range(n):
            if seed not in placed:
                yield from rec(extend(order + [seed], len(order)))

    yield from rec([])


def _relabel_key(X: FiniteBiquasile, order: Sequence[int]) -> tuple[int, ...]:
    # order[k] is the old (0-indexed) element that receives new label k
    n = X.order
    new = [0] * n
    for k, e in enumerate(order):
        new[e] = k
    S, D = X.star, X.dot
    star = [new[S[order[i]][order[j]] - 1] for i in range(n) for j in range(n)]
    dot = [new[D[order[i]][order[j]] - 1] for i in range(n) for j in range(n)]
    return tuple(star + dot)


def canonical_form(X: FiniteBiquasile) -> FiniteBiquasile:
    """The lexicographically least relabelling reached by seeded closure.

    Two structures are isomorphic iff their canonical forms are equal.
    """
    best = min(_relabel_key(X, order) for order in _generation_orders(X))
    n = X.order
    flat = [v + 1 for v in best]
    star = [flat[i * n:(i + 1) * n] for i in range(n)]
    dot = [flat[n * n + i * n:n * n + (i + 1) * n] for i in range(n)]
    return FiniteBiquasile(tuple(map(tuple, star)), tuple(map(tuple, dot)))


def is_isomorphic(X: FiniteBiquasile, Y: FiniteBiquasile) -> BiquasileMap | None:
    """A witnessing isomorphism ``X -> Y``, or ``None``.

    Structures of different order are simply not isomorphic.
    """
    if X.order != Y.order:
        return None
    # An isomorphism carries each seeded-closure ordering of X to one of Y;
    # fix one ordering of Y and search orderings of X.
    y_order = next(_generation_orders(Y))
    y_key = _relabel_key(Y, y_order)
    for x_order in _generation_orders(X):
        if _relabel_key(X, x_order) == y_key:
            mapping = [0] * X.order
            for xo, yo in zip(x_order, y_order):
                mapping[xo] = yo + 1
            return BiquasileMap(X, Y, tuple(mapping))
    return None


def iso_classes(structures: Sequence[FiniteBiquasile]) -> list[list[FiniteBiquasile]]:
    """Partition into isomorphism classes.

    Classes are ordered by their canonical form and members keep
    lexicographic table order, so the result does not depend on the
    order of the input list.
    """
    classes: dict[tuple[int, ...], list[FiniteBiquasile]] = {}
    for X in structures:
        classes.setdefault(canonical_form(X).key(), []).append(X)
    return [sorted(classes[k], key=FiniteBiquasile.key) for k in sorted(classes)]


# -- substructures ------------------------------------------------------------


def subbiquasile_closure(X: FiniteBiquasile, subset: Iterable[int]) -> frozenset[int]:
    """Smallest superset closed under both operations and all four divisions."""
    S = set(subset)
    if not S:
        raise ValueError("closure of the empty set is not defined")
    if not S <= set(range(1, X.order + 1)):
        raise ValueError(f"subset {sorted(S)} is not inside 1..{X.order}")
    ops = (X.mul_star, X.mul_dot, X.ldiv_star, X.rdiv_star, X.ldiv_dot, X.rdiv_dot)
    frontier = list(S)
    while frontier:
        new = set()
        for u in frontier:
            for v in list(S):
                for op in ops:
                    for z in (op(u, v), op(v, u)):
                        if z not in S:
                            new.add(z)
        S |= new
        frontier = list(new)
    return frozenset(S)


def subbiquasiles(X: FiniteBiquasile) -> list[frozenset[int]]:
    """All proper nonempty closed subsets, by exhaustive scan."""
    n = X.order
    found = []
    for r in range(1, n):
        for combo in itertools.combinations(range(1, n + 1), r):
            if subbiquasile_closure(X, combo) == frozenset(combo):
                found.append(frozenset(combo))
    return found


def is_simple(X: FiniteBiquasile) -> bool:
    """True iff no proper nonempty subset is closed under the operations.

    The full set is not counted as a sub-biquasile, so order 1 is simple.
    """
    return not subbiquasiles(X)


# -- named constructions ------------------------------------------------------


def dehn_biquasile(m: int) -> FiniteBiquasile:
    """The abelian-group structure on Z_m: ``a . b = a + b``, ``x * y = y - x``.

    Element ``k`` in ``1..m`` stands for the residue ``k - 1``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    star = tuple(tuple((y - x) % m + 1 for y in range(m)) for x in range(m))
    dot = tuple(tuple((x + y) % m + 1 for y in range(m)) for x in range(m))
    return FiniteBiquasile(star, dot)


# -- text format --------------------------------------------------------------


def parse_block_matrices(text: str) -> list[FiniteBiquasile]:
    """Parse one or more block matrices separated by blank lines.

    ``#`` starts a comment.  Each block has ``n`` rows of ``2n`` integers.
    """
    blocks: list[list[list[int]]] = [[]]
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        try:
            blocks[-1].append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise TableError(f"non-integer entry in line {line!r}") from exc
    return [FiniteBiquasile.from_block_matrix(b) for b in blocks if b]


def format_block_matrices(structures: Iterable[FiniteBiquasile]) -> str:
    return "\n\n".join(X.to_text() for X in structures) + "\n"
