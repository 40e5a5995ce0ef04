"""Shared test utilities: random structure generators and independent references.

The reference implementations here (mutual information, Chow-Liu, naive clique
scan) are deliberately written from the definitions, not by calling the
library paths they are used to check.
"""

from __future__ import annotations

import math
import random
from collections import Counter

from charimset import CharVector, Dag, Dataset, UndirectedGraph, VarSet

NAMES = "abcdefghijklmnopqrst"


def base_of(n: int) -> VarSet:
    return VarSet(tuple(NAMES[:n]))


def random_dag(rng: random.Random, base: VarSet, p: float = 0.4) -> Dag:
    """Random DAG: random topological order, each forward pair an arc with prob p."""
    order = list(range(base.n))
    rng.shuffle(order)
    arcs = set()
    for x in range(base.n):
        for y in range(x + 1, base.n):
            if rng.random() < p:
                arcs.add((order[x], order[y]))
    return Dag(base, frozenset(arcs))


def random_connected_graph(rng: random.Random, base: VarSet, extra: float = 0.35,
                           max_edges: int | None = None) -> UndirectedGraph:
    """Random spanning tree plus extra edges; optionally capped in size."""
    n = base.n
    nodes = list(range(n))
    rng.shuffle(nodes)
    edges = set()
    for i in range(1, n):
        a, b = nodes[i], rng.choice(nodes[:i])
        edges.add((min(a, b), max(a, b)))
    candidates = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in edges]
    rng.shuffle(candidates)
    for pair in candidates:
        if max_edges is not None and len(edges) >= max_edges:
            break
        if rng.random() < extra:
            edges.add(pair)
    return UndirectedGraph(base, frozenset(edges))


def all_connected_graphs(base: VarSet):
    """Every connected labeled graph over the base set (meant for n <= 5)."""
    n = base.n
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    for code in range(1 << len(pairs)):
        edges = frozenset(pairs[i] for i in range(len(pairs)) if code >> i & 1)
        graph = UndirectedGraph(base, edges)
        if graph.is_connected():
            yield graph


def random_chordal_graph(rng: random.Random, base: VarSet,
                         attach: float = 0.55) -> tuple[UndirectedGraph, Dag]:
    """Random chordal graph from a random elimination ordering.

    Vertices are introduced in random order; each new vertex attaches to a
    clique among the vertices already present, so the reverse introduction
    order is a perfect elimination ordering.  Also returns the orientation
    along the introduction order, which is an immorality-free DAG of the same
    structure.
    """
    order = list(range(base.n))
    rng.shuffle(order)
    added: list[int] = []
    edges = set()
    neighbors: dict[int, set[int]] = {v: set() for v in range(base.n)}
    arcs = set()
    for v in order:
        if added and rng.random() < 0.9:
            anchor = rng.choice(added)
            clique = {anchor}
            rest = [u for u in added if u != anchor]
            rng.shuffle(rest)
            for u in rest:
                if rng.random() < attach and all(u in neighbors[w] for w in clique):
                    clique.add(u)
            for u in clique:
                edges.add((min(u, v), max(u, v)))
                neighbors[u].add(v)
                neighbors[v].add(u)
                arcs.add((u, v))  # earlier vertex -> new vertex
        added.append(v)
    return UndirectedGraph(base, frozenset(edges)), Dag(base, frozenset(arcs))


def random_binary_dataset(rng: random.Random, base: VarSet, rows: int) -> Dataset:
    """Binary data with some dependence between neighboring columns."""
    out = []
    for _ in range(rows):
        row = [rng.randrange(2)]
        for _ in range(base.n - 1):
            prev = row[-1]
            row.append(prev if rng.random() < 0.7 else rng.randrange(2))
        out.append(tuple(row))
    data = tuple(out)
    # guard against a degenerate constant column (vanishingly unlikely, but cheap)
    for col in range(base.n):
        if len({row[col] for row in data}) < 2:
            data = data[:-1] + (tuple(1 - v if c == col else v for c, v in enumerate(data[-1])),)
    return Dataset(base, (2,) * base.n, data)


def random_charvector(rng: random.Random, base: VarSet, density: float = 0.6,
                      lo: int = -5, hi: int = 5) -> CharVector:
    from charimset import masks_by_size

    values = {}
    for t in masks_by_size(base.n, 2):
        if rng.random() < density:
            values[t] = rng.randint(lo, hi)
    return CharVector(base, values)


def mutual_information(rows, i: int, j: int) -> float:
    """Empirical mutual information (nats) of columns i and j."""
    total = len(rows)
    joint: Counter = Counter()
    left: Counter = Counter()
    right: Counter = Counter()
    for row in rows:
        joint[(row[i], row[j])] += 1
        left[row[i]] += 1
        right[row[j]] += 1
    mi = 0.0
    for (x, y), c in sorted(joint.items()):
        mi += (c / total) * math.log(c * total / (left[x] * right[y]))
    return mi


def chow_liu_tree(dataset: Dataset) -> frozenset[tuple[int, int]]:
    """Dependence tree of maximum total mutual information (greedy, cycle-skip).

    Ties are broken the same way the learners break them: heavier first, then
    the canonical pair order.
    """
    n = dataset.base.n
    scored = sorted(
        (((a, b), mutual_information(dataset.rows, a, b))
         for a in range(n) for b in range(a + 1, n)),
        key=lambda kv: (-kv[1], kv[0]),
    )
    comp = list(range(n))

    def find(x: int) -> int:
        while comp[x] != x:
            x = comp[x]
        return x

    chosen = set()
    for (a, b), _ in scored:
        ra, rb = find(a), find(b)
        if ra != rb:
            comp[max(ra, rb)] = min(ra, rb)
            chosen.add((a, b))
            if len(chosen) == n - 1:
                break
    return frozenset(chosen)


def clique_masks(graph: UndirectedGraph, min_size: int = 2) -> set[int]:
    """Cliques by scanning every subset for pairwise adjacency."""
    out = set()
    for t in range(1 << graph.n):
        members = [v for v in range(graph.n) if t >> v & 1]
        if len(members) < min_size:
            continue
        if all(graph.has_edge(a, b) for x, a in enumerate(members) for b in members[x + 1:]):
            out.add(t)
    return out
