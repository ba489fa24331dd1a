"""Bundled knot and link diagrams and example structures."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterator

from .algebra import FiniteBiquasile, parse_block_matrices
from .diagram import DiagramError, OrientedPDCode, parse_pd

UNKNOT = OrientedPDCode((), free_loops=1, name="unknot")

_LINE = re.compile(r"^(\S+)\s+(PD\s*[\[(].*)$")
_KNOT_NAME = re.compile(r"^(\d+)_(\d+)$")
_LINK_NAME = re.compile(r"^L(\d+)[an](\d+)$")


def _data_text(*parts: str) -> str:
    return resources.files("biquasile").joinpath("data", *parts).read_text()


def parse_table(text: str, source: str = "<table>") -> dict[str, OrientedPDCode]:
    """Lines of ``name PD[...]``; blank lines and ``#`` comments are skipped."""
    out: dict[str, OrientedPDCode] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise DiagramError(f"{source}:{lineno}: expected 'name PD[...]'")
        name = m.group(1)
        if name in out:
            raise DiagramError(f"{source}:{lineno}: duplicate name {name}")
        try:
            out[name] = parse_pd(m.group(2), name=name)
        except DiagramError as exc:
            raise type(exc)(f"{source}:{lineno}: {exc}") from None
    return out


def expected_crossings(name: str) -> int | None:
    """Crossing number encoded in a Rolfsen or Thistlethwaite style name."""
    m = _KNOT_NAME.match(name) or _LINK_NAME.match(name)
    return int(m.group(1)) if m else None


@dataclass(frozen=True)
class KnotTable:
    entries: dict[str, OrientedPDCode]

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, name: str) -> OrientedPDCode:
        return self.entries[name]

    def names(self) -> list[str]:
        return list(self.entries)

    def crossing_mismatches(self) -> list[str]:
        return [name for name, pd in self.entries.items()
                if expected_crossings(name) not in (None, pd.n_crossings)]


@lru_cache(maxsize=None)
def knots() -> KnotTable:
    return KnotTable(parse_table(_data_text("knots.txt"), "knots.txt"))


@lru_cache(maxsize=None)
def links() -> KnotTable:
    return KnotTable(parse_table(_data_text("links.txt"), "links.txt"))


def lookup(name: str) -> OrientedPDCode:
    """Bundled diagram by name; ``unknot`` is the crossing-free circle."""
    if name in ("unknot", "0_1"):
        return UNKNOT
    for table in (knots(), links()):
        if name in table.entries:
            return table[name]
    raise KeyError(name)


def bundled_structure_names() -> list[str]:
    folder = resources.files("biquasile").joinpath("data", "structures")
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith(".biq"))


def bundled_structure(name: str) -> FiniteBiquasile:
    if name.endswith(".biq"):
        name = name[:-4]
    if name not in bundled_structure_names():
        raise KeyError(name)
    (X,) = parse_block_matrices(_data_text("structures", f"{name}.biq"))
    return X
