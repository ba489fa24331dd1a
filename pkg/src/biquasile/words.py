"""Biquasile words, presentations and Tietze generator elimination."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .diagram import CrossingRelation, DualGraphDiagram, crossing_relations, region_names, \
    DEFAULT_CONVENTION, Convention

# op symbol -> (left inverse builder, right inverse builder)
# For ``L op R = V``: solve_left gives L from (V, R), solve_right gives R from (L, V).
OPS = ("*", ".", "/*", "\\*", "/", "\\")


@dataclass(frozen=True)
class Gen:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Op:
    op: str
    left: "Word"
    right: "Word"

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown operation {self.op!r}")

    def __str__(self):
        return f"{_paren(self.left)}{self.op}{_paren(self.right)}"


Word = Union[Gen, Op]


def _paren(w: Word) -> str:
    return str(w) if isinstance(w, Gen) else f"({w})"


def star(u: Word, v: Word) -> Op:
    return Op("*", u, v)


def dot(u: Word, v: Word) -> Op:
    return Op(".", u, v)


def occurrences(w: Word, g: str) -> int:
    if isinstance(w, Gen):
        return int(w.name == g)
    return occurrences(w.left, g) + occurrences(w.right, g)


def generators_of(w: Word) -> set[str]:
    if isinstance(w, Gen):
        return {w.name}
    return generators_of(w.left) | generators_of(w.right)


def substitute(w: Word, g: str, replacement: Word) -> Word:
    if isinstance(w, Gen):
        return replacement if w.name == g else w
    return Op(w.op, substitute(w.left, g, replacement), substitute(w.right, g, replacement))


def _solve_left(op: str, value: Word, right: Word) -> Word:
    """L with ``L op right = value``."""
    return {
        "*": lambda: Op("/*", value, right),
        ".": lambda: Op("/", value, right),
        "/*": lambda: Op("*", value, right),
        "\\*": lambda: Op("/*", right, value),
        "/": lambda: Op(".", value, right),
        "\\": lambda: Op("/", right, value),
    }[op]()


def _solve_right(op: str, left: Word, value: Word) -> Word:
    """R with ``left op R = value``."""
    return {
        "*": lambda: Op("\\*", left, value),
        ".": lambda: Op("\\", left, value),
        "/*": lambda: Op("\\*", value, left),
        "\\*": lambda: Op("*", left, value),
        "/": lambda: Op("\\", value, left),
        "\\": lambda: Op(".", left, value),
    }[op]()


def isolate(side: Word, other: Word, g: str) -> Word | None:
    """Rewrite ``side = other`` as ``g = W``; ``g`` must occur once in ``side``."""
    if occurrences(side, g) != 1 or occurrences(other, g):
        return None
    while isinstance(side, Op):
        if occurrences(side.left, g):
            other = _solve_left(side.op, other, side.right)
            side = side.left
        else:
            other = _solve_right(side.op, side.left, other)
            side = side.right
    return other


@dataclass(frozen=True)
class Presentation:
    """Generators and relations ``lhs = rhs`` between words."""

    generators: tuple[str, ...]
    relations: tuple[tuple[Word, Word], ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(tuple(r) for r in self.relations))
        known = set(self.generators)
        if len(known) != len(self.generators):
            raise ValueError("duplicate generator names")
        for lhs, rhs in self.relations:
            missing = (generators_of(lhs) | generators_of(rhs)) - known
            if missing:
                raise ValueError(f"relation uses unknown generators {sorted(missing)}")

    def __str__(self):
        rels = ", ".join(f"{l} = {r}" for l, r in self.relations)
        return f"< {', '.join(self.generators)} | {rels} >"


def relation_word(rel: CrossingRelation, names: Sequence[str]) -> tuple[Word, Word]:
    t, h, a, b = rel.normalized()
    return star(Gen(names[t]), dot(Gen(names[a]), Gen(names[b]))), Gen(names[h])


def fundamental_presentation(dgd: DualGraphDiagram,
                             convention: Convention = DEFAULT_CONVENTION) -> Presentation:
    """One generator per region, one relation per crossing."""
    names = region_names(dgd.n_vertices)
    rels = [relation_word(r, names) for r in crossing_relations(dgd, convention)]
    return Presentation(tuple(names), tuple(rels))


def tietze_eliminate(p: Presentation, g: str) -> Presentation | None:
    """Drop ``g`` using a relation that can be solved as ``g = W``.

    A relation with ``g`` as one whole side is preferred; otherwise the
    first relation in which ``g`` occurs exactly once is rearranged with
    the division operations.  Returns ``None`` when no relation allows it.
    """
    if g not in p.generators:
        raise ValueError(f"{g!r} is not a generator")
    choice = None
    for idx, (lhs, rhs) in enumerate(p.relations):
        for side, other in ((lhs, rhs), (rhs, lhs)):
            if side == Gen(g) and not occurrences(other, g):
                choice = (idx, other)
                break
        if choice:
            break
    if choice is None:
        for idx, (lhs, rhs) in enumerate(p.relations):
            w = isolate(lhs, rhs, g) or isolate(rhs, lhs, g)
            if w is not None:
                choice = (idx, w)
                break
    if choice is None:
        return None
    idx, w = choice
    rels = [(substitute(l, g, w), substitute(r, g, w))
            for i, (l, r) in enumerate(p.relations) if i != idx]
    return Presentation(tuple(x for x in p.generators if x != g), tuple(rels))


def simplify(p: Presentation) -> Presentation:
    """Eliminate generators greedily while some relation has a bare-generator side.

    Relations are scanned in order; the first side that is a single
    generator not occurring on the other side is eliminated.
    """
    while True:
        target = None
        for lhs, rhs in p.relations:
            for side, other in ((rhs, lhs), (lhs, rhs)):
                if isinstance(side, Gen) and not occurrences(other, side.name):
                    target = side.name
                    break
            if target:
                break
        if target is None:
            return p
        p = tietze_eliminate(p, target)


def evaluate(w: Word, env: dict[str, int], X) -> int:
    """Value of ``w`` in the finite biquasile ``X`` (1-indexed elements)."""
    if isinstance(w, Gen):
        return env[w.name]
    u = evaluate(w.left, env, X)
    v = evaluate(w.right, env, X)
    return {
        "*": X.mul_star, ".": X.mul_dot, "/*": X.rdiv_star,
        "\\*": X.ldiv_star, "/": X.rdiv_dot, "\\": X.ldiv_dot,
    }[w.op](u, v)
