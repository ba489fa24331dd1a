"""Oriented link diagrams and their dual graph diagrams.

PD conventions
--------------
A crossing is a 4-tuple of edge labels listed counterclockwise, starting
with the incoming under-edge (positions 0..3).  The under strand runs
0 -> 2.  The over strand runs 3 -> 1 at a positive crossing and 1 -> 3 at
a negative one.  Corner ``p`` of a crossing is the quadrant between
positions ``p`` and ``p + 1`` (mod 4).

Dual graph convention
---------------------
At every crossing the quadrant between the two incoming strand ends
(in-in) and the one between the two outgoing ends (out-out) are opposite.
They are joined by the directed edge, in-in -> out-out.  The other two
quadrants are joined by the signed edge, whose sign is the crossing sign.
Standing in the in-in quadrant and looking towards out-out, ``left`` is
the signed endpoint on the left and ``right`` the one on the right.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class DiagramError(ValueError):
    """Base class for diagram input problems."""


class PDParseError(DiagramError):
    pass


class LabelError(DiagramError):
    pass


class OrientationError(DiagramError):
    pass


class UnsupportedDiagram(DiagramError):
    pass


class ReconstructionError(DiagramError):
    """A dual graph diagram whose two graphs are not a dual planar pair."""


# Strand continuation through a crossing, by entry position.
_THROUGH = {0: 2, 2: 0, 1: 3, 3: 1}


def _infer_directions(crossings: Sequence[tuple[int, int, int, int]]) -> list[int]:
    """Crossing signs deduced from under-strand directions.

    Under strands fix the direction of every edge they touch; the over
    strand at a crossing inherits a direction from either of its edges.
    Crossings left undetermined fall back to the label-order rule of the
    Knot Atlas (over strand runs from label ``l`` to ``l + 1``).
    """
    where: dict[int, list[tuple[int, int]]] = {}
    for ci, c in enumerate(crossings):
        for p, e in enumerate(c):
            where.setdefault(e, []).append((ci, p))
    state: dict[tuple[int, int], bool] = {}  # True = strand enters the crossing here
    queue: list[tuple[int, int]] = []

    def setdir(inc, entering):
        old = state.get(inc)
        if old is None:
            state[inc] = entering
            queue.append(inc)
        elif old != entering:
            raise OrientationError(f"edge {crossings[inc[0]][inc[1]]} is oriented inconsistently")

    def drain():
        while queue:
            ci, p = queue.pop()
            entering = state[(ci, p)]
            e = crossings[ci][p]
            for other in where[e]:
                if other != (ci, p):
                    setdir(other, not entering)
            setdir((ci, _THROUGH[p]), not entering)

    for ci in range(len(crossings)):
        setdir((ci, 0), True)
        setdir((ci, 2), False)
    drain()
    for ci, (i, j, k, l) in enumerate(crossings):
        if (ci, 1) not in state:
            over_from_l = (j - l == 1) or (l - j > 1)
            setdir((ci, 3), over_from_l)
            drain()
    return [1 if state[(ci, 3)] else -1 for ci in range(len(crossings))]


@dataclass(frozen=True)
class OrientedPDCode:
    """An oriented link diagram.

    ``signs`` may be omitted, in which case it is inferred from the
    labels.  ``free_loops`` counts crossing-free circles; it may only be
    nonzero when there are no crossings.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...] | None = None
    free_loops: int = 0
    name: str = ""

    def __post_init__(self):
        crossings = tuple(tuple(int(v) for v in c) for c in self.crossings)
        for c in crossings:
            if len(c) != 4:
                raise PDParseError(f"crossing {c} does not have four labels")
        object.__setattr__(self, "crossings", crossings)
        counts: dict[int, int] = {}
        for c in crossings:
            for e in c:
                counts[e] = counts.get(e, 0) + 1
        bad = sorted(e for e, k in counts.items() if k != 2)
        if bad:
            raise LabelError(f"labels {bad} do not occur exactly twice")
        if sorted(counts) != list(range(1, 2 * len(crossings) + 1)):
            raise LabelError(f"labels must be exactly 1..{2 * len(crossings)}")
        inferred = tuple(_infer_directions(crossings))
        if self.signs is None:
            object.__setattr__(self, "signs", inferred)
        else:
            signs = tuple(int(s) for s in self.signs)
            if len(signs) != len(crossings) or any(s not in (1, -1) for s in signs):
                raise OrientationError("signs must be one of +1/-1 per crossing")
            object.__setattr__(self, "signs", signs)
            self._check_orientation()
        if self.free_loops < 0:
            raise ValueError("free_loops must be non-negative")

    def _check_orientation(self):
        heads: dict[int, int] = {}
        tails: dict[int, int] = {}
        for ci, c in enumerate(self.crossings):
            for p in range(4):
                target = heads if self.entering(ci, p) else tails
                target[c[p]] = target.get(c[p], 0) + 1
        for e in set(heads) | set(tails):
            if heads.get(e) != 1 or tails.get(e) != 1:
                raise OrientationError(f"edge {e} needs exactly one head and one tail")

    def entering(self, ci: int, p: int) -> bool:
        """Whether the strand at position ``p`` of crossing ``ci`` points into it."""
        if p in (0, 2):
            return p == 0
        over_in = 3 if self.signs[ci] > 0 else 1
        return p == over_in

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @cached_property
    def _incidences(self) -> dict[int, list[tuple[int, int]]]:
        where: dict[int, list[tuple[int, int]]] = {}
        for ci, c in enumerate(self.crossings):
            for p, e in enumerate(c):
                where.setdefault(e, []).append((ci, p))
        return where

    def other_end(self, ci: int, p: int) -> tuple[int, int]:
        a, b = self._incidences[self.crossings[ci][p]]
        return b if a == (ci, p) else a

    @cached_property
    def components(self) -> list[list[int]]:
        """Edge labels of each component, in traversal order."""
        comps = []
        seen: set[int] = set()
        for start in sorted(self._incidences):
            if start in seen:
                continue
            comp = []
            e = start
            while e not in seen:
                seen.add(e)
                comp.append(e)
                ci, p = next(inc for inc in self._incidences[e] if self.entering(*inc))
                e = self.crossings[ci][_THROUGH[p]]
            comps.append(comp)
        return comps + [[] for _ in range(self.free_loops)]

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def mirror(self) -> "OrientedPDCode":
        new = []
        for (i, j, k, l), s in zip(self.crossings, self.signs):
            new.append((l, i, j, k) if s > 0 else (j, k, l, i))
        return OrientedPDCode(tuple(new), tuple(-s for s in self.signs), self.free_loops, self.name)

    def reverse(self) -> "OrientedPDCode":
        new = [(k, l, i, j) for (i, j, k, l) in self.crossings]
        return OrientedPDCode(tuple(new), self.signs, self.free_loops, self.name)

    def reverse_components(self, which: Iterable[int]) -> "OrientedPDCode":
        """Reverse the orientation of the given components (indices into ``components``)."""
        flipped = set()
        for idx in which:
            flipped.update(self.components[idx])
        new, signs = [], []
        for ci, c in enumerate(self.crossings):
            enters = [self.entering(ci, p) != (c[p] in flipped) for p in range(4)]
            # the under strand occupies positions 0 and 2; start from its entering end
            start = 0 if enters[0] else 2
            rot = tuple(c[(start + r) % 4] for r in range(4))
            over_in = (3 if enters[(start + 3) % 4] else 1)
            new.append(rot)
            signs.append(1 if over_in == 3 else -1)
        return OrientedPDCode(tuple(new), tuple(signs), self.free_loops, self.name)

    def variant(self, which: str) -> "OrientedPDCode":
        """One of ``id``, ``mirror``, ``reverse``, ``mirror-reverse``."""
        if which == "id":
            return self
        if which == "mirror":
            return self.mirror()
        if which == "reverse":
            return self.reverse()
        if which == "mirror-reverse":
            return self.mirror().reverse()
        raise ValueError(f"unknown variant {which!r}")

    def to_text(self) -> str:
        body = ", ".join("X[%d,%d,%d,%d]" % c for c in self.crossings)
        return f"PD[{body}]"


_TUPLE = re.compile(r"X\s*[\[(]([^\])]*)[\])]")


def parse_pd(text: str, name: str = "") -> OrientedPDCode:
    """Parse ``PD[X[a,b,c,d], ...]`` (brackets or parentheses).

    The empty code ``PD[]`` is the 0-crossing unknot.
    """
    text = text.strip()
    stripped = _TUPLE.sub("", text)
    if re.search(r"[0-9]", stripped):
        raise PDParseError(f"stray labels outside X[...] tuples in {text!r}")
    crossings = []
    for m in _TUPLE.finditer(text):
        parts = [p.strip() for p in m.group(1).split(",")]
        if len(parts) != 4 or not all(re.fullmatch(r"[0-9]+", p) for p in parts):
            raise PDParseError(f"malformed crossing X[{m.group(1)}]")
        crossings.append(tuple(int(p) for p in parts))
    if not crossings and not re.fullmatch(r"PD\s*[\[(]\s*[\])]", text):
        raise PDParseError(f"no crossings found in {text!r}")
    return OrientedPDCode(tuple(crossings), free_loops=0 if crossings else 1, name=name)


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(v) for v in self.letters))
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        for v in self.letters:
            if v == 0 or abs(v) >= self.strands:
                raise ValueError(f"generator {v} invalid on {self.strands} strands")

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        """``"k: i j -i ..."``."""
        head, _, body = text.partition(":")
        if not _:
            raise PDParseError("braid must look like 'k: i j -i ...'")
        try:
            return cls(int(head), tuple(int(t) for t in body.split()))
        except ValueError as exc:
            raise PDParseError(str(exc)) from exc


def braid_closure(word: BraidWord, name: str = "") -> OrientedPDCode:
    """PD code of the closed braid, all strands running upward.

    A positive letter ``i`` is a positive crossing in which the strand
    at position ``i`` passes over the strand at position ``i + 1``.
    """
    k = word.strands
    parent: dict[int, int] = {}

    def new_edge():
        e = len(parent)
        parent[e] = e
        return e

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    start = [new_edge() for _ in range(k)]
    cur = list(start)
    raw = []
    for v in word.letters:
        lft, rgt = abs(v) - 1, abs(v)
        new_l, new_r = new_edge(), new_edge()
        if v > 0:
            raw.append((cur[rgt], new_r, new_l, cur[lft]))
        else:
            raw.append((cur[lft], cur[rgt], new_r, new_l))
        cur[lft], cur[rgt] = new_l, new_r
    free = 0
    for p in range(k):
        if cur[p] == start[p]:
            free += 1
        else:
            parent[find(cur[p])] = find(start[p])
    raw = [tuple(find(e) for e in c) for c in raw]
    signs = tuple(1 if v > 0 else -1 for v in word.letters)
    if not raw:
        return OrientedPDCode((), (), free_loops=free, name=name)
    if free:
        raise UnsupportedDiagram("braid closure has a strand without crossings (split diagram)")
    return _relabel_by_traversal(raw, signs, name)


def _relabel_by_traversal(raw, signs, name=""):
    """Renumber edges 1..2c consecutively along each component."""
    where: dict[int, list[tuple[int, int]]] = {}
    for ci, c in enumerate(raw):
        for p, e in enumerate(c):
            where.setdefault(e, []).append((ci, p))

    def entering(ci, p):
        if p in (0, 2):
            return p == 0
        return p == (3 if signs[ci] > 0 else 1)

    label: dict[int, int] = {}
    for start in sorted(where):
        e = start
        while e not in label:
            label[e] = len(label) + 1
            ci, p = next(inc for inc in where[e] if entering(*inc))
            e = raw[ci][_THROUGH[p]]
    crossings = tuple(tuple(label[e] for e in c) for c in raw)
    return OrientedPDCode(crossings, tuple(signs), name=name)


# -- regions ------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """A face of the diagram on the sphere.

    ``boundary`` lists ``(edge label, side)`` with ``side`` ``'L'`` or
    ``'R'`` relative to the edge orientation; ``corners`` lists the
    ``(crossing, corner)`` pairs the face touches.
    """

    id: int
    boundary: tuple[tuple[int, str], ...]
    corners: tuple[tuple[int, int], ...]


def _crossing_graph_connected(pd: OrientedPDCode) -> bool:
    n = pd.n_crossings
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    for incs in pd._incidences.values():
        (a, _), (b, _) = incs
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def regions(pd: OrientedPDCode) -> list[Region]:
    """Faces of the diagram on the sphere, found by corner traversal.

    From corner ``p`` of a crossing, the face continues along the edge at
    position ``p + 1`` and re-enters the next crossing at the corner
    whose index is that edge's position there.
    """
    if pd.n_crossings == 0:
        return [Region(i, (), ()) for i in range(pd.free_loops + 1)]
    if pd.free_loops:
        raise UnsupportedDiagram("diagram mixes crossings with crossing-free circles")
    if not _crossing_graph_connected(pd):
        raise UnsupportedDiagram("diagram with crossings must be connected")
    seen: set[tuple[int, int]] = set()
    faces = []
    for ci in range(pd.n_crossings):
        for p in range(4):
            if (ci, p) in seen:
                continue
            corners, boundary = [], []
            cur = (ci, p)
            while cur not in seen:
                seen.add(cur)
                corners.append(cur)
                x, q = cur
                pos = (q + 1) % 4
                e = pd.crossings[x][pos]
                # the face lies to the right of this edge when walked away from x
                boundary.append((e, "L" if pd.entering(x, pos) else "R"))
                cur = pd.other_end(x, pos)
            faces.append(Region(len(faces), tuple(boundary), tuple(corners)))
    if len(faces) != pd.n_crossings + 2:
        raise UnsupportedDiagram(
            f"{len(faces)} faces for {pd.n_crossings} crossings: the PD code is not planar")
    return faces


# -- dual graph diagrams ------------------------------------------------------


@dataclass(frozen=True)
class DualCrossing:
    """The four regions around one crossing, counterclockwise by corner.

    ``in_corner`` is the corner between the two incoming strand ends.
    """

    corners: tuple[int, int, int, int]
    in_corner: int
    sign: int

    @property
    def tail(self) -> int:
        return self.corners[self.in_corner]

    @property
    def head(self) -> int:
        return self.corners[(self.in_corner + 2) % 4]

    @property
    def left(self) -> int:
        return self.corners[(self.in_corner + 3) % 4]

    @property
    def right(self) -> int:
        return self.corners[(self.in_corner + 1) % 4]


@dataclass(frozen=True)
class DualGraphDiagram:
    """Region vertices with one directed and one signed edge per crossing.

    ``arcs`` pairs the strand ends ``(crossing, position)`` that are joined
    by an edge of the underlying diagram; it records the quadrilateral
    tiling needed to reconstruct the diagram.
    """

    n_vertices: int
    crossings: tuple[DualCrossing, ...]
    arcs: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = ()
    n_components: int = 0
    name: str = ""

    @property
    def directed_edges(self) -> list[tuple[int, int, int]]:
        return [(c.tail, c.head, i) for i, c in enumerate(self.crossings)]

    @property
    def signed_edges(self) -> list[tuple[int, int, int, int]]:
        return [(c.left, c.right, c.sign, i) for i, c in enumerate(self.crossings)]


def dual_graph(pd: OrientedPDCode) -> DualGraphDiagram:
    faces = regions(pd)
    corner_region = {}
    for f in faces:
        for corner in f.corners:
            corner_region[corner] = f.id
    crossings = []
    for ci, s in enumerate(pd.signs):
        corners = tuple(corner_region[(ci, p)] for p in range(4))
        # positive: over enters at 3, so ends 3 and 0 are incoming -> corner 3
        crossings.append(DualCrossing(corners, 3 if s > 0 else 0, s))
    arcs = tuple(tuple(pd._incidences[e]) for e in sorted(pd._incidences))
    return DualGraphDiagram(len(faces), tuple(crossings), arcs, pd.n_components, pd.name)


@dataclass(frozen=True)
class Convention:
    """How a crossing of the dual graph becomes a relation.

    ``flip_direction`` reads the directed edge out-out -> in-in;
    ``swap_sides`` exchanges the two signed endpoints.
    """

    flip_direction: bool = False
    swap_sides: bool = False

    @property
    def id(self) -> str:
        return f"{'F' if self.flip_direction else 'D'}{'S' if self.swap_sides else 'N'}"

    @classmethod
    def from_id(cls, ident: str) -> "Convention":
        if len(ident) != 2 or ident[0] not in "DF" or ident[1] not in "NS":
            raise ValueError(f"unknown convention id {ident!r}")
        return cls(ident[0] == "F", ident[1] == "S")


ALL_CONVENTIONS = tuple(Convention(f, s) for f in (False, True) for s in (False, True))
DEFAULT_CONVENTION = Convention()


@dataclass(frozen=True)
class CrossingRelation:
    """``y = x * (a . b)`` when ``sign`` is +1, ``x = y * (a . b)`` when -1."""

    x: int
    y: int
    a: int
    b: int
    sign: int
    crossing: int = -1

    def normalized(self) -> tuple[int, int, int, int]:
        """``(t, h, a, b)`` with ``h = t * (a . b)``."""
        if self.sign > 0:
            return self.x, self.y, self.a, self.b
        return self.y, self.x, self.a, self.b


def crossing_relations(dgd: DualGraphDiagram,
                       convention: Convention = DEFAULT_CONVENTION) -> list[CrossingRelation]:
    """One relation per crossing: ``x -> y`` directed pair, ``a`` left, ``b`` right."""
    rels = []
    for i, c in enumerate(dgd.crossings):
        x, y = (c.head, c.tail) if convention.flip_direction else (c.tail, c.head)
        a, b = (c.right, c.left) if convention.swap_sides else (c.left, c.right)
        rels.append(CrossingRelation(x, y, a, b, c.sign, i))
    return rels


def directed_component_count(dgd: DualGraphDiagram) -> int:
    """Weak components of the directed subgraph, isolated vertices dropped."""
    parent = list(range(dgd.n_vertices))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    touched = set()
    for t, h, _ in dgd.directed_edges:
        touched.update((t, h))
        parent[find(t)] = find(h)
    return len({find(v) for v in touched})


def _entering(c: DualCrossing, p: int) -> bool:
    return p in (c.in_corner, (c.in_corner + 1) % 4)


def validate_reconstruction(dgd: DualGraphDiagram) -> bool:
    """Whether the diagram rebuilds into a coherently oriented link.

    Each arc is one quadrilateral of the tiling; the regions on its two
    sides must agree at both ends (otherwise the pair of graphs is not
    dual and :class:`ReconstructionError` is raised).  The orientation
    is coherent when every arc leaves one crossing and enters the other;
    ``False`` means reconstruction needs source-sink vertices, i.e. the
    diagram is a magnetic graph.
    """
    if not dgd.crossings:
        return True
    used = set()
    for (x, p), (y, q) in dgd.arcs:
        used.update([(x, p), (y, q)])
        cx, cy = dgd.crossings[x], dgd.crossings[y]
        if cx.corners[(p - 1) % 4] != cy.corners[q] or cx.corners[p] != cy.corners[(q - 1) % 4]:
            raise ReconstructionError(f"arc {(x, p)}-{(y, q)} does not bound matching regions")
    if len(used) != 4 * len(dgd.crossings) or len(dgd.arcs) != 2 * len(dgd.crossings):
        raise ReconstructionError("every strand end must lie on exactly one arc")
    if dgd.n_vertices != len(dgd.crossings) + 2:
        raise ReconstructionError("vertex count violates the Euler formula for the sphere")
    return all(_entering(dgd.crossings[x], p) != _entering(dgd.crossings[y], q)
               for (x, p), (y, q) in dgd.arcs)


def reconstruct(dgd: DualGraphDiagram) -> OrientedPDCode:
    """The oriented PD code drawn by a coherent dual graph diagram."""
    if not validate_reconstruction(dgd):
        raise ReconstructionError("incoherent orientations: this is a magnetic graph")
    if not dgd.crossings:
        return OrientedPDCode((), (), free_loops=max(dgd.n_vertices - 1, 1))
    label = {}
    for e, (u, v) in enumerate(dgd.arcs):
        label[u] = label[v] = e
    raw, signs = [], []
    for ci, c in enumerate(dgd.crossings):
        under_in = (c.in_corner + 1) % 4 if c.sign > 0 else c.in_corner
        raw.append(tuple(label[(ci, (under_in + r) % 4)] for r in range(4)))
        signs.append(c.sign)
    return _relabel_by_traversal(raw, signs)


def with_reversed_edge(dgd: DualGraphDiagram, crossing: int) -> DualGraphDiagram:
    """Copy of ``dgd`` with the directed edge at one crossing reversed."""
    cs = list(dgd.crossings)
    c = cs[crossing]
    cs[crossing] = DualCrossing(c.corners, (c.in_corner + 2) % 4, c.sign)
    return DualGraphDiagram(dgd.n_vertices, tuple(cs), dgd.arcs, dgd.n_components, dgd.name)


def region_names(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"r{i}" for i in range(n)]
