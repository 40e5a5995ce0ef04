"""Exhaustive ground truth for small variable sets.

Everything here is computed from first principles -- explicit superset sums,
explicit cycle checks, explicit subset scans -- precisely because these
routines serve as the oracle against which the fast paths in `core`, `recon`
and `learners` are verified.  Do not "optimize" them by delegating to those
modules.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

from .core import CharVector, Dag, Imset, UndirectedGraph, VarSet, bit_indices, masks_by_size
from .learners import CliqueObjective, LearnResult, WeightTable
from .recon import MixedGraph

EXPECTED_DAG_COUNTS = {2: 3, 3: 25, 4: 543, 5: 29281}

PROBLEMS = ("forest", "spanning_tree", "degree_forest", "degree_tree", "matching", "chordal")


def standard_imset_by_definition(g: Dag) -> Imset:
    """Standard imset assembled term by term from its defining sum."""
    vals: dict[int, int] = {}
    for mask, delta in [(g.base.full_mask, 1), (0, -1)]:
        vals[mask] = vals.get(mask, 0) + delta
    for i in range(g.base.n):
        pa = g.parents_mask(i)
        vals[pa] = vals.get(pa, 0) + 1
        fam = pa | (1 << i)
        vals[fam] = vals.get(fam, 0) - 1
    return Imset(g.base, vals)


def charvector_by_definition(g: Dag) -> CharVector:
    """Characteristic vector via dense, explicit superset sums of the standard imset."""
    n = g.base.n
    u = standard_imset_by_definition(g)
    dense = [0] * (1 << n)
    for mask, value in u.items():
        dense[mask] = value
    vals: dict[int, int] = {}
    for t in range(1 << n):
        if bin(t).count("1") < 2:
            continue
        p = 0
        for x in range(1 << n):
            if t & ~x == 0:
                p += dense[x]
        if 1 - p:
            vals[t] = 1 - p
    return CharVector(g.base, vals)


def skeleton_immoralities_key(g: Dag):
    """Hashable (skeleton, immoralities) fingerprint, computed by direct scans."""
    skeleton = frozenset((min(i, j), max(i, j)) for i, j in g.arcs)
    triples = set()
    for c in range(g.base.n):
        for a in range(g.base.n):
            for b in range(a + 1, g.base.n):
                if a == c or b == c:
                    continue
                if (a, c) in g.arcs and (b, c) in g.arcs:
                    if (a, b) not in g.arcs and (b, a) not in g.arcs:
                        triples.add((a, b, c))
    return skeleton, frozenset(triples)


def essential_from_class(dags) -> MixedGraph:
    """Essential graph built from its definition over a whole equivalence class.

    An arc appears iff every member carries it; a pair connected in some
    member but oriented differently across members becomes undirected.
    """
    dags = list(dags)
    arc_sets = [set(g.arcs) for g in dags]
    pairs = {(min(i, j), max(i, j)) for arcs in arc_sets for i, j in arcs}
    arcs = set()
    und = set()
    for a, b in sorted(pairs):
        if all((a, b) in arcs_g for arcs_g in arc_sets):
            arcs.add((a, b))
        elif all((b, a) in arcs_g for arcs_g in arc_sets):
            arcs.add((b, a))
        else:
            und.add((a, b))
    return MixedGraph(dags[0].base, frozenset(arcs), frozenset(und))


@dataclass(frozen=True)
class DagUniverse:
    """All labeled DAGs over a small variable set, partitioned into equivalence classes."""

    base: VarSet
    dags: tuple[Dag, ...]
    classes: dict  # CharVector -> tuple[Dag, ...]
    representatives: tuple[Dag, ...]


def enumerate_dags(n: int, base: VarSet | None = None) -> DagUniverse:
    """Every labeled DAG on ``n`` nodes exactly once, with its class partition.

    Iterates all arc-sets over ordered pairs and keeps the acyclic ones; class
    keys are characteristic vectors computed definitionally.  Representatives
    are the class members with the least canonical arc list.
    """
    if not 2 <= n <= 5:
        raise ValueError(f"exhaustive enumeration supports 2 <= n <= 5, got {n}")
    if base is None:
        base = VarSet(tuple(string.ascii_lowercase[:n]))
    if base.n != n:
        raise ValueError("base variable set does not have n variables")
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    m = len(pairs)
    full = (1 << n) - 1
    dags = []
    for code in range(1 << m):
        parents = [0] * n
        rest = code
        while rest:
            low = rest & -rest
            b = low.bit_length() - 1
            rest ^= low
            i, j = pairs[b]
            parents[j] |= 1 << i
        # Explicit cycle check: peel off nodes with no remaining parents.
        removed = 0
        progress = True
        while progress and removed != full:
            progress = False
            for v in range(n):
                if not removed >> v & 1 and parents[v] & ~removed == 0:
                    removed |= 1 << v
                    progress = True
        if removed != full:
            continue
        arcs = frozenset(pairs[b] for b in bit_indices(code))
        dags.append(Dag(base, arcs))
    classes: dict[CharVector, list[Dag]] = {}
    for g in dags:
        classes.setdefault(charvector_by_definition(g), []).append(g)
    frozen = {key: tuple(members) for key, members in classes.items()}
    reps = tuple(
        sorted(
            (min(members, key=lambda g: g.arcs_sorted()) for members in frozen.values()),
            key=lambda g: g.arcs_sorted(),
        )
    )
    return DagUniverse(base, tuple(dags), frozen, reps)


def naive_is_chordal(h: UndirectedGraph) -> bool:
    """Chordality by enumerating simple cycles and looking for chords."""
    adj = tuple(h.neighbors_mask(i) for i in range(h.n))

    def has_chord(cycle: list[int]) -> bool:
        size = len(cycle)
        for x in range(size):
            for y in range(x + 2, size):
                if x == 0 and y == size - 1:
                    continue
                if adj[cycle[x]] >> cycle[y] & 1:
                    return True
        return False

    def walk(start: int, path: list[int], used: int):
        v = path[-1]
        for u in bit_indices(adj[v]):
            if u == start and len(path) >= 4:
                if path[1] < path[-1] and not has_chord(path):
                    yield path
            elif u > start and not used >> u & 1:
                path.append(u)
                yield from walk(start, path, used | (1 << u))
                path.pop()

    for start in range(h.n):
        for _ in walk(start, [start], 1 << start):
            return False
    return True


def _max_clique_size(h: UndirectedGraph) -> int:
    """Largest pairwise-adjacent subset, by scanning all subsets."""
    adj = tuple(h.neighbors_mask(i) for i in range(h.n))
    best = 0
    for t in range(1 << h.n):
        members = list(bit_indices(t))
        if all(adj[a] >> b & 1 for x, a in enumerate(members) for b in members[x + 1:]):
            best = max(best, len(members))
    return best


def max_clique_size(h: UndirectedGraph) -> int:
    if h.n > 8:
        raise ValueError("brute-force clique size capped at 8 nodes")
    return _max_clique_size(h)


def _is_acyclic_undirected(edges: list[tuple[int, int]], n: int) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    for root in range(n):
        if root in seen:
            continue
        stack = [(root, -1)]
        seen.add(root)
        while stack:
            v, parent = stack.pop()
            for u in adj[v]:
                if u == parent:
                    continue
                if u in seen:
                    return False
                seen.add(u)
                stack.append((u, v))
    return True


def _is_connected(edges: list[tuple[int, int]], n: int) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def brute_force_optimum(problem: str, weights, *, k: int | None = None,
                        max_clique: int | None = None,
                        allowed: UndirectedGraph | None = None) -> LearnResult | None:
    """True optimum of a restricted learning problem by full enumeration.

    ``weights`` is a `WeightTable` for the edge problems or a
    `CliqueObjective` for ``chordal`` (then ``allowed`` must be given).
    Returns None when the problem is infeasible (spanning variants only).
    """
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    if problem == "chordal":
        if not isinstance(weights, CliqueObjective):
            raise ValueError("chordal brute force expects a CliqueObjective")
        if allowed is None:
            raise ValueError("chordal brute force needs the allowed graph")
        base = allowed.base
    else:
        if not isinstance(weights, WeightTable):
            raise ValueError(f"{problem} brute force expects a WeightTable")
        allowed = weights.allowed
        base = weights.base
    n = base.n
    if n > 8:
        raise ValueError("brute force capped at 8 nodes")
    if problem in ("degree_forest", "degree_tree") and k is None:
        raise ValueError("degree-bounded problems need k")

    edges = allowed.edges_sorted()
    m = len(edges)

    clique_needs: list[tuple[int, float]] = []
    if problem == "chordal":
        edge_pos = {e: i for i, e in enumerate(edges)}
        for t in masks_by_size(n, 2):
            wt = weights.weight(t)
            if wt == 0.0:
                continue
            members = list(bit_indices(t))
            need = 0
            ok = True
            for x, a in enumerate(members):
                for b in members[x + 1:]:
                    pos = edge_pos.get((a, b))
                    if pos is None:
                        ok = False
                        break
                    need |= 1 << pos
                if not ok:
                    break
            if ok:
                clique_needs.append((need, wt))

    best_value: float | None = None
    best_code = 0
    for code in range(1 << m):
        subset = [edges[b] for b in bit_indices(code)]
        if problem in ("forest", "degree_forest", "matching"):
            if not _is_acyclic_undirected(subset, n):
                continue
            bound = 1 if problem == "matching" else k
            if bound is not None:
                degree = [0] * n
                for a, b in subset:
                    degree[a] += 1
                    degree[b] += 1
                if max(degree) > bound:
                    continue
        elif problem in ("spanning_tree", "degree_tree"):
            if len(subset) != n - 1 or not _is_acyclic_undirected(subset, n) \
                    or not _is_connected(subset, n):
                continue
            if problem == "degree_tree":
                degree = [0] * n
                for a, b in subset:
                    degree[a] += 1
                    degree[b] += 1
                if max(degree) > k:
                    continue
        else:  # chordal
            graph = UndirectedGraph(base, frozenset(subset))
            if not naive_is_chordal(graph):
                continue
            if max_clique is not None and _max_clique_size(graph) > max_clique:
                continue
        if problem == "chordal":
            value = sum((wt for need, wt in clique_needs if need & ~code == 0), 0.0)
        else:
            value = sum((weights.weight(a, b) for a, b in subset), 0.0)
        if best_value is None or value > best_value:
            best_value = value
            best_code = code
    if best_value is None:
        return None
    chosen = frozenset(edges[b] for b in bit_indices(best_code))
    return LearnResult(UndirectedGraph(base, chosen), best_value)
