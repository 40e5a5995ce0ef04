"""Command-line interface: imset transforms, graph recovery, learning, verification.

Commands read and write JSON documents.  Graph documents carry ``variables``,
``arcs`` and ``edges``; imset documents carry ``variables`` and ``entries``
(subset as a sorted list of names, then the integer value).  The structured
result is the only thing written to stdout; diagnostics go to stderr.

Exit codes: 0 success, 1 validation/parse error, 2 infeasible, 3 instance
over the exact-search cap.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bruteforce, core, learners, recon, scoring
from .core import CharVector, Dag, Imset, UndirectedGraph, VarSet

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_OVER_CAP = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_ERROR):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------- documents


def _read_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read document {path!r}: {exc}") from exc


def _document_base(doc: dict) -> VarSet:
    names = doc.get("variables")
    if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
        raise CliError("document needs a 'variables' list of names")
    try:
        return VarSet(tuple(names))
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _pairs(doc: dict, key: str, base: VarSet) -> list[tuple[int, int]]:
    out = []
    for item in doc.get(key, []):
        if not (isinstance(item, list) and len(item) == 2):
            raise CliError(f"{key} entries must be [from, to] pairs")
        try:
            out.append((base.index(item[0]), base.index(item[1])))
        except KeyError as exc:
            raise CliError(str(exc)) from exc
    return out


def load_dag(doc: dict) -> Dag:
    base = _document_base(doc)
    if doc.get("edges"):
        raise CliError("expected a directed graph; undirected edges present")
    try:
        return Dag(base, frozenset(_pairs(doc, "arcs", base)))
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def load_undirected(doc: dict) -> UndirectedGraph:
    base = _document_base(doc)
    if doc.get("arcs"):
        raise CliError("expected an undirected graph; arcs present")
    try:
        return UndirectedGraph(base, frozenset(_pairs(doc, "edges", base)))
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def graph_document(base: VarSet, arcs=(), edges=()) -> dict:
    return {
        "variables": list(base.names),
        "arcs": [[base.names[i], base.names[j]] for i, j in sorted(arcs)],
        "edges": [[base.names[a], base.names[b]] for a, b in sorted(edges)],
    }


def _subset_names(base: VarSet, mask: int) -> list[str]:
    return sorted(base.names_of(mask))


def imset_document(value: Imset | CharVector) -> dict:
    base = value.base
    if isinstance(value, CharVector):
        entries = [[_subset_names(base, m), v] for m, v in value.dense_items()]
    else:
        entries = [[_subset_names(base, m), v] for m, v in value.items()]
    return {"variables": list(base.names), "entries": entries}


def load_imset_entries(doc: dict) -> tuple[VarSet, dict[int, int]]:
    base = _document_base(doc)
    values: dict[int, int] = {}
    for item in doc.get("entries", []):
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
            raise CliError("entries must be [[names...], value] pairs")
        names, value = item
        if not isinstance(value, int):
            raise CliError(f"entry value {value!r} is not an integer")
        try:
            mask = base.mask_of(names)
        except KeyError as exc:
            raise CliError(str(exc)) from exc
        if len(set(names)) != len(names):
            raise CliError(f"duplicate name in subset {names!r}")
        if mask in values:
            raise CliError(f"duplicate subset {sorted(names)!r}")
        values[mask] = value
    return base, values


def load_charvector(doc: dict) -> CharVector:
    base, values = load_imset_entries(doc)
    for mask in values:
        if mask.bit_count() < 2:
            raise CliError("characteristic entries need subsets of size >= 2")
    return CharVector(base, values)


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


# ----------------------------------------------------------------- commands


def cmd_imset(args) -> int:
    doc = _read_json(args.input)
    if args.transform == "standard":
        result: Imset | CharVector = core.standard_imset(load_dag(doc))
    elif args.transform == "characteristic":
        result = core.characteristic_imset(load_dag(doc))
    elif args.transform == "portrait":
        base, values = load_imset_entries(doc)
        result = core.portrait(Imset(base, values))
    else:  # mobius
        result = core.mobius_restore(load_charvector(doc), args.total)
    _emit(imset_document(result))
    return EXIT_OK


def cmd_recover(args) -> int:
    doc = _read_json(args.input)
    vector = load_charvector(doc)
    verdict = recon.validate_characteristic_vector(vector)
    if not verdict.accepted:
        _emit({"accepted": False, "reason": verdict.reason})
        return EXIT_ERROR
    essential = recon.essential_graph(verdict.dag)
    _emit({
        "accepted": True,
        "essential_graph": graph_document(essential.base, essential.arcs, essential.undirected),
        "witness": graph_document(verdict.dag.base, verdict.dag.arcs),
    })
    return EXIT_OK


def _read_csv_rows(path: str) -> list[list[str]]:
    import csv

    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            return [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise CliError(f"cannot read {path!r}: {exc}") from exc


def _load_pair_weights(path: str, restriction: UndirectedGraph | None):
    rows = _read_csv_rows(path)
    if len(rows) < 2:
        raise CliError("weights file needs a header row and at least one weight row")
    body = rows[1:]
    if restriction is not None:
        base = restriction.base
    else:
        names: list[str] = []
        for row in body:
            for name in row[:2]:
                name = name.strip()
                if name not in names:
                    names.append(name)
        try:
            base = VarSet(tuple(names))
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    weights: dict[tuple[int, int], float] = {}
    for row in body:
        if len(row) != 3:
            raise CliError(f"weight row {row!r} must have three cells: a, b, weight")
        try:
            a, b = base.index(row[0].strip()), base.index(row[1].strip())
            value = float(row[2])
        except (KeyError, ValueError) as exc:
            raise CliError(str(exc)) from exc
        if a == b:
            raise CliError(f"weight row {row!r} repeats a variable")
        weights[(min(a, b), max(a, b))] = value
    if restriction is not None:
        allowed = restriction
        if set(weights) != set(allowed.edges):
            raise CliError("weights must cover exactly the restriction's edges")
    else:
        allowed = UndirectedGraph(base, frozenset(weights))
    try:
        return learners.WeightTable(allowed, weights)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _load_clique_weights(path: str, base: VarSet) -> learners.CliqueObjective:
    rows = _read_csv_rows(path)
    if len(rows) < 2:
        raise CliError("clique weights file needs a header row and at least one row")
    values: dict[int, float] = {}
    for row in rows[1:]:
        if len(row) != 2:
            raise CliError(f"clique weight row {row!r} must have two cells: subset, weight")
        names = [s.strip() for s in row[0].split(";") if s.strip()]
        try:
            mask = base.mask_of(names)
            value = float(row[1])
        except (KeyError, ValueError) as exc:
            raise CliError(str(exc)) from exc
        values[mask] = values.get(mask, 0.0) + value
    try:
        return learners.CliqueObjective(base, values)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def cmd_learn(args) -> int:
    restriction = None
    if args.restriction:
        restriction = load_undirected(_read_json(args.restriction))

    oracle = None
    if args.data:
        try:
            with open(args.data, "r", encoding="utf-8") as fh:
                dataset = scoring.ingest_csv(fh)
        except OSError as exc:
            raise CliError(f"cannot read {args.data!r}: {exc}") from exc
        except scoring.DatasetError as exc:
            raise CliError(str(exc)) from exc
        oracle = scoring.ScoreOracle(dataset, args.criterion)
        allowed = restriction if restriction is not None else UndirectedGraph.complete(dataset.base)
        if restriction is not None and restriction.base != dataset.base:
            raise CliError("restriction and data use different variable sets")

    try:
        if args.task == "chordal":
            if oracle is not None:
                result = learners.best_chordal_subgraph(oracle, allowed, args.max_clique)
            else:
                if not args.weights:
                    raise CliError("chordal task needs --data or --weights")
                if restriction is None:
                    raise CliError("chordal task with clique weights needs --restriction")
                objective = _load_clique_weights(args.weights, restriction.base)
                result = learners.best_chordal_subgraph(objective, restriction, args.max_clique)
        else:
            if oracle is not None:
                table = learners.WeightTable.from_scores(oracle, allowed)
            elif args.weights:
                table = _load_pair_weights(args.weights, restriction)
            else:
                raise CliError(f"task {args.task!r} needs --data or --weights")
            if args.task == "forest":
                result = learners.max_weight_forest(table)
            elif args.task == "tree":
                result = learners.max_weight_spanning_tree(table)
            elif args.task == "forest-k":
                if args.k is None:
                    raise CliError("task forest-k needs --k")
                result = learners.degree_bounded_forest(table, args.k)
            else:  # tree-k
                if args.k is None:
                    raise CliError("task tree-k needs --k")
                result = learners.degree_bounded_spanning_tree(table, args.k)
    except learners.SearchCapError as exc:
        raise CliError(str(exc), EXIT_OVER_CAP) from exc
    except ValueError as exc:
        raise CliError(str(exc)) from exc

    if result is None:
        _emit({"task": args.task, "feasible": False})
        return EXIT_INFEASIBLE
    doc = {
        "task": args.task,
        "criterion": args.criterion if args.data else None,
        "graph": graph_document(result.graph.base, (), result.graph.edges),
        "objective": result.objective,
        "optimal": result.optimal,
    }
    _emit(doc)
    return EXIT_OK


def _verification_checks(n: int) -> tuple[dict, bool]:
    universe = bruteforce.enumerate_dags(n)
    checks = []

    def record(name: str, passed: bool) -> None:
        checks.append({"name": name, "passed": bool(passed)})

    expected_dags = bruteforce.EXPECTED_DAG_COUNTS[n]
    record("dag-count", len(universe.dags) == expected_dags)

    expected_classes = {2: 2, 3: 11, 4: 185, 5: 8782}[n]
    record("class-count", len(universe.classes) == expected_classes)

    record(
        "characteristic-entries-0-1",
        all(v in (0, 1) for key in universe.classes for _, v in key.items()),
    )

    by_charvec = {}
    by_structure = {}
    by_standard = {}
    for g in universe.dags:
        by_charvec.setdefault(bruteforce.charvector_by_definition(g), set()).add(g)
        by_structure.setdefault(bruteforce.skeleton_immoralities_key(g), set()).add(g)
        by_standard.setdefault(bruteforce.standard_imset_by_definition(g), set()).add(g)
    partitions_agree = (
        set(map(frozenset, by_charvec.values()))
        == set(map(frozenset, by_structure.values()))
        == set(map(frozenset, by_standard.values()))
    )
    record("partition-agreement", partitions_agree)

    record(
        "fast-path-vs-definition",
        all(core.characteristic_imset(g) == key and core.characteristic_direct(g) == key
            for key, members in universe.classes.items() for g in members),
    )

    record(
        "pattern-reconstruction",
        all(recon.pattern_from_charvector(key) == recon.pattern(members[0])
            for key, members in universe.classes.items()),
    )

    record(
        "essential-graph-classwise",
        all(recon.essential_graph(members[0]) == bruteforce.essential_from_class(members)
            and all(recon.essential_graph(g) == recon.essential_graph(members[0])
                    for g in members)
            for members in universe.classes.values()),
    )

    record(
        "validation-roundtrip",
        all(recon.validate_characteristic_vector(key).accepted
            for key in universe.classes),
    )

    report = {
        "n": n,
        "dags": len(universe.dags),
        "classes": len(universe.classes),
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }
    return report, report["all_passed"]


def cmd_verify(args) -> int:
    n = args.verify_n
    if not 2 <= n <= 5:
        raise CliError(f"verification supports 2 <= n <= 5, got {n}")
    if n == 5 and not args.allow_slow:
        raise CliError("n = 5 enumerates 29281 DAGs; pass --allow-slow to confirm")
    report, passed = _verification_checks(n)
    for check in report["checks"]:
        status = "pass" if check["passed"] else "FAIL"
        print(f"{status}  {check['name']}", file=sys.stderr)
    _emit(report)
    return EXIT_OK if passed else EXIT_ERROR


# --------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits with 2; keep 1 for parse errors
        self.print_usage(sys.stderr)
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="charimset", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_imset = sub.add_parser("imset", help="imset transforms of a graph or imset document")
    p_imset.add_argument("transform", choices=["standard", "characteristic", "portrait", "mobius"])
    p_imset.add_argument("input", nargs="?", default="-", help="JSON document path or - for stdin")
    p_imset.add_argument("--total", type=int, default=0,
                         help="entry sum for the mobius reconstruction (default 0)")
    p_imset.set_defaults(func=cmd_imset)

    p_recover = sub.add_parser("recover", help="recover and validate a graph from a "
                                               "characteristic vector document")
    p_recover.add_argument("input", nargs="?", default="-")
    p_recover.set_defaults(func=cmd_recover)

    p_learn = sub.add_parser("learn", help="learn a restricted structure from data or weights")
    p_learn.add_argument("--task", required=True,
                         choices=["forest", "tree", "forest-k", "tree-k", "chordal"])
    p_learn.add_argument("--data", help="CSV data file (header row of variable names)")
    p_learn.add_argument("--weights", help="CSV weights file: a,b,weight rows "
                                           "(or subset;names,weight for chordal)")
    p_learn.add_argument("--restriction", help="JSON undirected graph restricting candidate edges")
    p_learn.add_argument("--k", type=int, help="degree bound for forest-k / tree-k")
    p_learn.add_argument("--max-clique", type=int, dest="max_clique",
                         help="clique size bound for the chordal task")
    p_learn.add_argument("--criterion", choices=["ll", "bic"], default="bic")
    p_learn.set_defaults(func=cmd_learn)

    p_verify = sub.add_parser("verify", help="run the exhaustive invariant suite")
    p_verify.add_argument("--verify-n", type=int, required=True, dest="verify_n")
    p_verify.add_argument("--allow-slow", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


def main_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
