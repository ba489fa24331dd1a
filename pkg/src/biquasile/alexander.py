"""Linear (Alexander) biquasiles over Z_m and symbolic Laurent matrices.

For units d, n, s of Z_m the operations

    x * y = (-d s n^2) x + n y,     x . y = d x + s y

form a biquasile.  Element k of the materialized table stands for the
residue k - 1.

Laurent polynomials live in Z[d^±1, s^±1, n^±1]; exponent triples are
always ordered (d, s, n).
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .algebra import FiniteBiquasile, canonical_form
from .diagram import DEFAULT_CONVENTION, Convention, CrossingRelation, OrientedPDCode, \
    crossing_relations, dual_graph

VARIABLES = ("d", "s", "n")


class ParameterError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class AlexanderParams:
    m: int
    d: int
    n: int
    s: int

    def __post_init__(self):
        if self.m < 2:
            raise ParameterError(f"modulus must be at least 2, got {self.m}")
        for name in ("d", "n", "s"):
            v = getattr(self, name)
            if math.gcd(v, self.m) != 1:
                raise ParameterError(f"{name}={v} is not a unit mod {self.m}")

    @property
    def star_coefficient(self) -> int:
        """The coefficient of x in x * y, that is -d s n^2 mod m."""
        return (-self.d * self.s * self.n * self.n) % self.m

    def star(self, x: int, y: int) -> int:
        return (self.star_coefficient * x + self.n * y) % self.m

    def dot(self, x: int, y: int) -> int:
        return (self.d * x + self.s * y) % self.m


def materialize(p: AlexanderParams) -> FiniteBiquasile:
    r = range(p.m)
    star = tuple(tuple(p.star(x, y) + 1 for y in r) for x in r)
    dot = tuple(tuple(p.dot(x, y) + 1 for y in r) for x in r)
    return FiniteBiquasile(star, dot)


def units(m: int) -> list[int]:
    return [u for u in range(1, m) if math.gcd(u, m) == 1]


def enumerate_params(m: int) -> list[AlexanderParams]:
    """Every unit triple, ordered by (d, n, s)."""
    if m < 2:
        raise ParameterError("modulus must be at least 2")
    us = units(m)
    return [AlexanderParams(m, d, n, s) for d, n, s in itertools.product(us, repeat=3)]


def classify_params(m: int) -> list[list[AlexanderParams]]:
    """Group configurations whose materialized biquasiles are isomorphic.

    Isomorphisms are arbitrary bijections of {1..m}, not only linear ones.
    Classes are ordered by their canonical tables.
    """
    groups: dict[tuple[int, ...], list[AlexanderParams]] = {}
    for p in enumerate_params(m):
        groups.setdefault(canonical_form(materialize(p)).key(), []).append(p)
    return [groups[k] for k in sorted(groups)]


@dataclass(frozen=True)
class ScanRow:
    m: int
    configurations: int
    classes: int


def alexander_scan(moduli: Iterable[int]) -> list[ScanRow]:
    rows = []
    for m in moduli:
        classes = classify_params(m)
        rows.append(ScanRow(m, sum(len(c) for c in classes), len(classes)))
    return rows


def scan_csv(rows: Sequence[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "configurations", "non_isomorphic"])
    for r in rows:
        w.writerow([r.m, r.configurations, r.classes])
    return buf.getvalue()


# -- Laurent polynomials ------------------------------------------------------


Exponents = tuple[int, int, int]


class LaurentPoly:
    """Sparse polynomial in d, s, n with integer exponents; immutable."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponents, int] | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != 3:
                raise ValueError(f"exponent triple expected, got {e}")
            if c:
                clean[e] = clean.get(e, 0) + int(c)
        self._terms = {e: c for e, c in sorted(clean.items()) if c}

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, c: int = 1, d: int = 0, s: int = 0, n: int = 0) -> "LaurentPoly":
        return cls({(d, s, n): c})

    @property
    def terms(self) -> dict[Exponents, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        other = _lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        other = _lift(other)
        out: dict[Exponents, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def evaluate_mod(self, m: int, d: int, s: int, n: int) -> int:
        """Value at (d, s, n) in Z_m; negative powers use modular inverses."""
        total = 0
        for (ed, es, en), c in self._terms.items():
            term = c
            for base, e in ((d, ed), (s, es), (n, en)):
                try:
                    term *= pow(base, e, m)
                except ValueError:
                    raise ParameterError(f"{base} is not invertible mod {m}") from None
            total += term
        return total % m

    def to_json(self) -> list[list[int]]:
        return [[*e, c] for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, entries: Iterable[Sequence[int]]) -> "LaurentPoly":
        out: dict[Exponents, int] = {}
        for ed, es, en, c in entries:
            out[(ed, es, en)] = out.get((ed, es, en), 0) + c
        return cls(out)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            factors = [v if k == 1 else f"{v}^{k}" for v, k in zip(VARIABLES, e) if k]
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"


def _lift(v) -> LaurentPoly:
    return v if isinstance(v, LaurentPoly) else LaurentPoly.constant(int(v))


D = LaurentPoly.monomial(d=1)
S = LaurentPoly.monomial(s=1)
N = LaurentPoly.monomial(n=1)
STAR_COEFFICIENT = -(D * S * N * N)
TAIL_COEFFICIENTS = (STAR_COEFFICIENT, N * D, N * S, LaurentPoly.constant(-1))


@dataclass(frozen=True)
class LaurentMatrix:
    rows: tuple[tuple[LaurentPoly, ...], ...]
    n_cols: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(_lift(v) for v in r) for r in self.rows))
        for r in self.rows:
            if len(r) != self.n_cols:
                raise ValueError("ragged Laurent matrix")

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "LaurentMatrix":
        return cls(tuple((LaurentPoly(),) * n_cols for _ in range(n_rows)), n_cols)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.n_cols

    def to_json(self) -> str:
        payload = {
            "variables": list(VARIABLES),
            "shape": list(self.shape),
            "entries": [[v.to_json() for v in r] for r in self.rows],
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LaurentMatrix":
        obj = json.loads(text)
        if obj.get("variables", list(VARIABLES)) != list(VARIABLES):
            raise ValueError(f"unsupported variable order {obj['variables']}")
        n_rows, n_cols = obj["shape"]
        rows = tuple(tuple(LaurentPoly.from_json(e) for e in r) for r in obj["entries"])
        if len(rows) != n_rows:
            raise ValueError("row count does not match shape")
        return cls(rows, n_cols)

    def __str__(self):
        cells = [[str(v) for v in r] for r in self.rows]
        if not cells:
            return f"(0 x {self.n_cols} matrix)"
        widths = [max(len(r[j]) for r in cells) for j in range(self.n_cols)]
        return "\n".join("[ " + "  ".join(c.rjust(w) for c, w in zip(r, widths)) + " ]" for r in cells)


def symbolic_relation_row(rel: CrossingRelation, n_regions: int) -> tuple[LaurentPoly, ...]:
    """Row of ``-dsn^2 t + nd a + ns b - h = 0`` where ``h = t * (a . b)``.

    Coinciding regions have their coefficients added in one column.
    """
    t, h, a, b = rel.normalized()
    row = [LaurentPoly() for _ in range(n_regions)]
    for col, coeff in zip((t, a, b, h), TAIL_COEFFICIENTS):
        if not 0 <= col < n_regions:
            raise IndexError(f"region {col} outside 0..{n_regions - 1}")
        row[col] = row[col] + coeff
    return tuple(row)


def symbolic_matrix(relations: Sequence[CrossingRelation], n_regions: int) -> LaurentMatrix:
    return LaurentMatrix(tuple(symbolic_relation_row(r, n_regions) for r in relations), n_regions)


def diagram_matrix(pd: OrientedPDCode, convention: Convention = DEFAULT_CONVENTION) -> LaurentMatrix:
    dgd = dual_graph(pd)
    return symbolic_matrix(crossing_relations(dgd, convention), dgd.n_vertices)


def specialize(M: LaurentMatrix, p: AlexanderParams) -> list[list[int]]:
    return [[v.evaluate_mod(p.m, p.d, p.s, p.n) for v in r] for r in M.rows]


def numeric_relation_row(rel: CrossingRelation, n_regions: int, p: AlexanderParams) -> list[int]:
    """Direct integer linearization, independent of the Laurent machinery."""
    t, h, a, b = rel.normalized()
    row = [0] * n_regions
    row[t] += p.star_coefficient
    row[a] += p.n * p.d
    row[b] += p.n * p.s
    row[h] -= 1
    return [v % p.m for v in row]
