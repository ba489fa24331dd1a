"""Command line interface: ``biq <subcommand> ...``.

Exit codes: 0 success, 2 usage, 3 unparseable input, 4 failed
validation, 5 exhausted budget.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import enumerate as enum_mod
from . import solve
from .alexander import AlexanderParams, ParameterError, alexander_scan, diagram_matrix, \
    materialize, scan_csv
from .algebra import FiniteBiquasile, StructureError, TableError, check_axioms, \
    format_block_matrices, iso_classes, parse_block_matrices
from .diagram import (ALL_CONVENTIONS, DEFAULT_CONVENTION, BraidWord, Convention, DiagramError,
                      OrientedPDCode, PDParseError, braid_closure, crossing_relations, dual_graph,
                      parse_pd, regions, validate_reconstruction)
from .tables import bundled_structure, bundled_structure_names, knots, links, lookup
from .words import fundamental_presentation, simplify

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_INVALID = 4
EXIT_BUDGET = 5

VARIANTS = ("id", "mirror", "reverse", "mirror-reverse")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- input resolution ---------------------------------------------------------


def load_structures(ref: str) -> list[FiniteBiquasile]:
    """A block-matrix file, or the name of a bundled structure."""
    path = Path(ref)
    try:
        if path.is_file():
            found = parse_block_matrices(path.read_text())
        else:
            found = [bundled_structure(ref)]
    except KeyError:
        raise CliError(f"no structure file or bundled structure named {ref!r} "
                       f"(bundled: {', '.join(bundled_structure_names())})", EXIT_PARSE) from None
    except (TableError, StructureError) as exc:
        raise CliError(f"{ref}: {exc}", EXIT_INVALID) from None
    if not found:
        raise CliError(f"{ref}: no structures found", EXIT_PARSE)
    for i, X in enumerate(found):
        if not check_axioms(X):
            raise CliError(f"{ref}: structure {i + 1} violates the biquasile axioms", EXIT_INVALID)
    return found


def load_diagram(ref: str | None, braid: str | None) -> OrientedPDCode:
    try:
        if braid is not None:
            return braid_closure(BraidWord.parse(braid), name=f"braid {braid}")
        if ref is None:
            raise CliError("give a diagram name, a PD code or --braid", EXIT_PARSE)
        if ref.lstrip().startswith("PD"):
            return parse_pd(ref, name="input")
        path = Path(ref)
        if path.is_file():
            return parse_pd(path.read_text(), name=path.stem)
        return lookup(ref)
    except KeyError:
        raise CliError(f"unknown diagram {ref!r}", EXIT_PARSE) from None
    except PDParseError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    except (DiagramError, ValueError) as exc:
        raise CliError(str(exc), EXIT_INVALID) from None


def alexander_structure(values: Sequence[int]) -> tuple[AlexanderParams, FiniteBiquasile]:
    m, d, n, s = values
    try:
        p = AlexanderParams(m, d, n, s)
    except ParameterError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    return p, materialize(p)


# -- result cache -------------------------------------------------------------


def structure_hash(X: FiniteBiquasile) -> str:
    return hashlib.sha256(X.to_text().encode()).hexdigest()[:16]


class ResultCache:
    """Counts keyed by structure hash, diagram, variant and convention.

    Stored as one JSON file; writes go through :meth:`save` only.
    """

    FILENAME = "phi-cache.json"

    def __init__(self, directory: str | os.PathLike | None):
        self.path = Path(directory) / self.FILENAME if directory else None
        self.data: dict[str, int] = {}
        if self.path and self.path.exists():
            self.data = json.loads(self.path.read_text())

    @staticmethod
    def key(X: FiniteBiquasile, diagram: str, variant: str, convention: Convention) -> str:
        return f"{structure_hash(X)}|{diagram}|{variant}|{convention.id}"

    def get(self, key: str) -> int | None:
        return self.data.get(key)

    def put(self, key: str, value: int) -> None:
        self.data[key] = value

    def save(self) -> None:
        if not self.path:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(json.dumps(self.data, sort_keys=True, indent=0))
        os.replace(tmp, self.path)


def _phi_task(args):
    pd, X, convention = args
    return solve.phi_invariant(pd, X, convention)


def phi_matrix(structures: Sequence[FiniteBiquasile], diagrams: Sequence[OrientedPDCode],
               variant: str, convention: Convention, jobs: int,
               cache: ResultCache, verify: bool) -> list[list[int]]:
    """Counts for every (structure, diagram) pair; rows follow ``structures``."""
    cells = [(i, j) for i in range(len(structures)) for j in range(len(diagrams))]
    keys = {c: ResultCache.key(structures[c[0]], diagrams[c[1]].name, variant, convention)
            for c in cells}
    out = [[0] * len(diagrams) for _ in structures]
    todo = []
    for c in cells:
        hit = cache.get(keys[c])
        if hit is None or verify:
            todo.append(c)
        else:
            out[c[0]][c[1]] = hit
    tasks = [(diagrams[j].variant(variant), structures[i], convention) for i, j in todo]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_phi_task, tasks, chunksize=4))
    else:
        values = [_phi_task(t) for t in tasks]
    mismatches = []
    for c, v in zip(todo, values):
        cached = cache.get(keys[c])
        if cached is not None and cached != v:
            mismatches.append(f"{keys[c]}: cached {cached}, recomputed {v}")
        out[c[0]][c[1]] = v
        cache.put(keys[c], v)
    if mismatches:
        raise CliError("cache verification failed:\n" + "\n".join(mismatches), EXIT_INVALID)
    cache.save()
    return out


# -- subcommands ---------------------------------------------------------------


def cmd_enumerate(args, out) -> int:
    budget = args.budget_nodes is not None or args.budget_seconds is not None
    if args.n > 4 and not budget:
        raise CliError(f"order {args.n} needs --budget-nodes or --budget-seconds", EXIT_INVALID)
    partial = False
    try:
        found = enum_mod.enumerate_biquasiles(args.n, max_nodes=args.budget_nodes,
                                              max_seconds=args.budget_seconds,
                                              allow_large=True, jobs=args.jobs)
    except enum_mod.BudgetExceeded as exc:
        found, partial = exc.found, True
        print(f"budget exhausted after {exc.nodes} nodes; {len(found)} structures found so far",
              file=sys.stderr)
    text = format_block_matrices(found) if found else ""
    if partial:
        text = f"# PARTIAL: search stopped by budget, {len(found)} structures\n" + text
    if args.out:
        Path(args.out).write_text(text)
    elif not args.classify:
        out.write(text)
    if args.classify:
        line = f"{len(found)} structures, {len(iso_classes(found))} classes"
        out.write(line + (" (partial)" if partial else "") + "\n")
    elif args.out:
        out.write(f"{len(found)} structures\n")
    return EXIT_BUDGET if partial else EXIT_OK


def cmd_phi(args, out) -> int:
    pd = load_diagram(args.diagram, args.braid).variant(args.variant)
    convention = Convention.from_id(args.convention)
    if args.alexander:
        p, X = alexander_structure(args.alexander)
        structures = [X]
        linear = solve.phi_linear(pd, p.m, p.d, p.n, p.s, convention)
    elif args.structure:
        structures = load_structures(args.structure)
        linear = None
    else:
        raise CliError("give a structure file or --alexander m d n s", EXIT_PARSE)
    for X in structures:
        problem = solve.ColoringProblem(fundamental_presentation(dual_graph(pd), convention), X)
        if args.show_colorings:
            try:
                sols = solve.enumerate_colorings(problem, budget=args.budget)
            except solve.BudgetExceeded as exc:
                raise CliError(str(exc), EXIT_BUDGET) from None
            count = len(sols)
            for sol in sols:
                out.write(" ".join(f"{g}={v}" for g, v in sol.items()) + "\n")
        else:
            count = solve.count_colorings(problem)
        if linear is not None and linear != count:
            raise CliError(f"engines disagree: backtracking {count}, linear {linear}", EXIT_INVALID)
        out.write(f"{count}\n")
    return EXIT_OK


def cmd_table(args, out) -> int:
    table = links() if args.links else knots()
    diagrams = [table[name] for name in table]
    names = list(table)
    structures, labels = [], []
    for ref in args.structures:
        found = load_structures(ref)
        for k, X in enumerate(found):
            structures.append(X)
            labels.append(Path(ref).stem if len(found) == 1 else f"{Path(ref).stem}#{k + 1}")
    cache = ResultCache(None if args.no_cache else os.environ.get("BIQ_CACHE_DIR"))
    convention = Convention.from_id(args.convention)
    values = phi_matrix(structures, diagrams, args.variant, convention,
                        args.jobs or os.cpu_count() or 1, cache, args.verify)

    def baseline(X, pd):
        return X.order ** (pd.n_components + 1)

    if args.format == "json":
        payload = {
            "variant": args.variant,
            "convention": convention.id,
            "diagrams": names,
            "rows": [
                {"structure": label,
                 "values": [{"diagram": name, "phi": v, "nontrivial": v != baseline(X, pd)}
                            for name, pd, v in zip(names, diagrams, row)]}
                for label, X, row in zip(labels, structures, values)
            ],
        }
        out.write(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    else:
        out.write(",".join(["structure"] + names) + "\n")
        for label, X, row in zip(labels, structures, values):
            cells = [f"{v}*" if v != baseline(X, pd) else str(v) for pd, v in zip(diagrams, row)]
            out.write(",".join([label] + cells) + "\n")
    return EXIT_OK


def cmd_alexander_scan(args, out) -> int:
    for m in args.m:
        if not 2 <= m <= 12:
            raise CliError(f"modulus {m} outside 2..12", EXIT_INVALID)
    rows = alexander_scan(args.m)
    if args.format == "csv":
        out.write(scan_csv(rows))
    else:
        for r in rows:
            out.write(f"m={r.m}: {r.configurations} configurations, {r.classes} classes\n")
    return EXIT_OK


def cmd_presentation(args, out) -> int:
    pd = load_diagram(args.diagram, args.braid).variant(args.variant)
    convention = Convention.from_id(args.convention)
    if args.symbolic:
        M = diagram_matrix(pd, convention)
        out.write((M.to_json() if args.json else str(M)) + "\n")
        return EXIT_OK
    p = fundamental_presentation(dual_graph(pd), convention)
    if args.simplify:
        p = simplify(p)
    out.write(f"{len(p.generators)} generators, {len(p.relations)} relations\n{p}\n")
    return EXIT_OK


def verify_data() -> list[str]:
    """Problems found in the bundled diagrams and structures; empty when clean."""
    problems = []
    for label, table in (("knots", knots()), ("links", links())):
        problems += [f"{label}: {name} crossing count does not match its name"
                     for name in table.crossing_mismatches()]
        for name in table:
            pd = table[name]
            try:
                if len(regions(pd)) != pd.n_crossings + 2:
                    problems.append(f"{name}: region count is not c + 2")
                dgd = dual_graph(pd)
                if not validate_reconstruction(dgd):
                    problems.append(f"{name}: dual graph does not reconstruct coherently")
                if len(crossing_relations(dgd)) != pd.n_crossings:
                    problems.append(f"{name}: relation count differs from crossing count")
            except DiagramError as exc:
                problems.append(f"{name}: {exc}")
        if label == "knots" and any(table[n].n_components != 1 for n in table):
            problems.append("knots: multi-component entry in the knot table")
    for name in bundled_structure_names():
        if not check_axioms(bundled_structure(name)):
            problems.append(f"structure {name}: axioms fail")
    return problems


def cmd_verify_data(args, out) -> int:
    problems = verify_data()
    for p in problems:
        out.write(p + "\n")
    out.write(f"{len(knots())} knots, {len(links())} links, "
              f"{len(bundled_structure_names())} structures: "
              f"{'OK' if not problems else f'{len(problems)} problems'}\n")
    return EXIT_INVALID if problems else EXIT_OK


# -- parser ---------------------------------------------------------------------


def _diagram_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("diagram", nargs="?", help="bundled name, PD code, or file holding a PD code")
    p.add_argument("--braid", help="closed braid instead of a diagram, e.g. '3: 1 -2 1 -2'")
    p.add_argument("--variant", choices=VARIANTS, default="id")
    p.add_argument("--convention", choices=[c.id for c in ALL_CONVENTIONS],
                   default=DEFAULT_CONVENTION.id)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biq", description="Finite biquasiles and coloring counts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="all biquasiles of a given order")
    p.add_argument("n", type=int)
    p.add_argument("--classify", action="store_true", help="print structure and class counts")
    p.add_argument("--out", help="write block matrices to this file")
    p.add_argument("--budget-nodes", type=int)
    p.add_argument("--budget-seconds", type=float)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("phi", help="coloring count of one diagram")
    _diagram_options(p)
    p.add_argument("structure", nargs="?", help="block-matrix file or bundled structure name")
    p.add_argument("--alexander", nargs=4, type=int, metavar=("M", "D", "N", "S"))
    p.add_argument("--show-colorings", action="store_true")
    p.add_argument("--budget", type=int, help="search node limit for --show-colorings")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("table", help="coloring counts over the bundled knots or links")
    p.add_argument("structures", nargs="*")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--knots", action="store_true")
    group.add_argument("--links", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=0, help="worker processes (default: all cores)")
    p.add_argument("--variant", choices=VARIANTS, default="id")
    p.add_argument("--convention", choices=[c.id for c in ALL_CONVENTIONS],
                   default=DEFAULT_CONVENTION.id)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--verify", action="store_true", help="recompute cached values and compare")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("alexander-scan", help="configuration and class counts over Z_m")
    p.add_argument("m", type=int, nargs="+")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_alexander_scan)

    p = sub.add_parser("presentation", help="fundamental presentation of a diagram")
    _diagram_options(p)
    p.add_argument("--simplify", action="store_true")
    p.add_argument("--symbolic", action="store_true", help="Laurent coefficient matrix instead")
    p.add_argument("--json", action="store_true", help="with --symbolic, emit JSON")
    p.set_defaults(func=cmd_presentation)

    p = sub.add_parser("verify-data", help="check the bundled data files")
    p.set_defaults(func=cmd_verify_data)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    # the phi subcommand takes the diagram first unless --braid is used
    if getattr(args, "braid", None) and args.command == "phi" and args.structure is None:
        args.structure, args.diagram = args.diagram, None
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
