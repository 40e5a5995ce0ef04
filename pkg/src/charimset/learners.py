"""Exact structure learners over restricted graph classes.

Forests and spanning trees are solved greedily (that is already exact).  The
degree-bounded variants and chordal-subgraph search are NP-hard, so they run
exact branch-and-bound / enumeration behind explicit size caps and refuse
larger inputs instead of silently degrading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .core import Dag, UndirectedGraph, VarSet, masks_by_size
from .recon import MixedGraph, consistent_extension, is_chordal

DEGREE_SEARCH_CAP = 16  # branch-and-bound over edges
ENUMERATION_CAP = 10    # plain edge-subset enumeration fallback
CHORDAL_SEARCH_CAP = 12  # chordal search with clique-weight pruning


class SearchCapError(ValueError):
    """Instance exceeds the exact-search size cap."""


@dataclass(frozen=True)
class LearnResult:
    graph: UndirectedGraph
    objective: float
    optimal: bool = True


class WeightTable:
    """Edge weights over an allowed candidate graph.

    Weights are defined exactly on the edges of the allowed graph; looking up
    anything else is an error.
    """

    def __init__(self, allowed: UndirectedGraph, weights: Mapping[tuple[int, int], float]):
        normalized = {}
        for (a, b), w in weights.items():
            a, b = int(a), int(b)
            pair = (min(a, b), max(a, b))
            w = float(w)
            if not math.isfinite(w):
                raise ValueError(f"weight for edge {pair} is not finite")
            normalized[pair] = w
        if set(normalized) != set(allowed.edges):
            raise ValueError("weights must be given exactly on the edges of the allowed graph")
        self.allowed = allowed
        self._weights = normalized

    @classmethod
    def from_scores(cls, oracle, allowed: UndirectedGraph | None = None) -> "WeightTable":
        """Weights from an oracle's edge gains; allowed defaults to the complete graph."""
        if allowed is None:
            allowed = UndirectedGraph.complete(oracle.base)
        return cls(allowed, {e: oracle.edge_weight(*e) for e in allowed.edges})

    @property
    def base(self) -> VarSet:
        return self.allowed.base

    def weight(self, a: int, b: int) -> float:
        pair = (min(a, b), max(a, b))
        if pair not in self._weights:
            raise ValueError(f"{pair} is not an edge of the allowed graph")
        return self._weights[pair]

    def edges_by_weight(self) -> list[tuple[tuple[int, int], float]]:
        """Edges sorted heaviest first; ties broken by the canonical pair order."""
        return sorted(self._weights.items(), key=lambda kv: (-kv[1], kv[0]))


class CliqueObjective:
    """Additive objective over clique indicators: value of a graph is the sum
    of weights over its cliques of size >= 2 (absent subsets weigh zero)."""

    def __init__(self, base: VarSet, values: Mapping[int, float]):
        self.base = base
        vals = {}
        for mask, w in values.items():
            mask = int(mask)
            if mask.bit_count() < 2 or mask > base.full_mask:
                raise ValueError("clique weights are indexed by subsets of size >= 2")
            w = float(w)
            if not math.isfinite(w):
                raise ValueError("clique weights must be finite")
            if w:
                vals[mask] = w
        self._values = vals

    @classmethod
    def from_scores(cls, oracle) -> "CliqueObjective":
        """Clique weights reproducing ``score(G) - score(empty)`` on chordal graphs.

        The weight of T is the alternating sum of scores of complete graphs
        over the subsets of T; for a decomposable score-equivalent criterion
        summing these weights over the cliques of a chordal graph recovers its
        score gain exactly.
        """
        base = oracle.base
        n = base.n
        complete_scores = {}
        for s in masks_by_size(n):
            members = [i for i in range(n) if s >> i & 1]
            arcs = frozenset(
                (members[x], members[y]) for x in range(len(members)) for y in range(x + 1, len(members))
            )
            complete_scores[s] = oracle.score(Dag(base, arcs))
        values = {}
        for t in masks_by_size(n, 2):
            acc = 0.0
            sub = t
            while True:
                sign = -1.0 if (t ^ sub).bit_count() & 1 else 1.0
                acc += sign * complete_scores[sub]
                if sub == 0:
                    break
                sub = (sub - 1) & t
            values[t] = acc
        return cls(base, values)

    def weight(self, mask: int) -> float:
        return self._values.get(mask, 0.0)

    def positive_items(self) -> list[tuple[int, float]]:
        return sorted((m, w) for m, w in self._values.items() if w > 0)

    def evaluate(self, graph: UndirectedGraph) -> float:
        """Sum of weights over the cliques (size >= 2) of ``graph``."""
        return sum((self._values.get(c, 0.0) for c in graph.cliques(min_size=2)), 0.0)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def copy(self) -> "_UnionFind":
        dup = _UnionFind.__new__(_UnionFind)
        dup.parent = list(self.parent)
        return dup


def max_weight_forest(w: WeightTable) -> LearnResult:
    """Greedy maximum-weight forest inside the allowed graph.

    Edges are taken heaviest first unless they would close a cycle; edges of
    non-positive weight never help a forest, so the scan stops there.
    """
    uf = _UnionFind(w.base.n)
    chosen = []
    total = 0.0
    for (a, b), wt in w.edges_by_weight():
        if wt <= 0:
            break
        if uf.union(a, b):
            chosen.append((a, b))
            total += wt
    return LearnResult(UndirectedGraph(w.base, frozenset(chosen)), total)


def max_weight_spanning_tree(w: WeightTable) -> LearnResult:
    """Greedy maximum-weight spanning tree of the allowed graph (must be connected)."""
    if not w.allowed.is_connected():
        raise ValueError("allowed graph is not connected; no spanning tree exists")
    uf = _UnionFind(w.base.n)
    chosen = []
    total = 0.0
    for (a, b), wt in w.edges_by_weight():
        if uf.union(a, b):
            chosen.append((a, b))
            total += wt
            if len(chosen) == w.base.n - 1:
                break
    return LearnResult(UndirectedGraph(w.base, frozenset(chosen)), total)


def _forest_relaxation(edges: list[tuple[tuple[int, int], float]], start: int,
                       uf: _UnionFind) -> float:
    """Value of the best forest completion from ``edges[start:]`` ignoring degrees."""
    relax = uf.copy()
    bound = 0.0
    for (a, b), wt in edges[start:]:
        if wt <= 0:
            break
        if relax.union(a, b):
            bound += wt
    return bound


def degree_bounded_forest(w: WeightTable, k: int) -> LearnResult:
    """Exact maximum-weight forest with every degree at most ``k``.

    Branch and bound over the weight-sorted edge list; the bound at each node
    is the unconstrained greedy forest completion.  With ``k = 1`` this solves
    maximum-weight matching (by exact search, not a blossom algorithm).
    """
    n = w.base.n
    if not 1 <= k < n - 1:
        raise ValueError(f"degree bound must satisfy 1 <= k < n - 1, got {k}")
    if n > DEGREE_SEARCH_CAP:
        raise SearchCapError(f"degree-bounded search capped at {DEGREE_SEARCH_CAP} nodes")
    edges = w.edges_by_weight()
    best_total = 0.0
    best_edges: tuple[tuple[int, int], ...] = ()

    def search(idx: int, uf: _UnionFind, degrees: list[int], total: float,
               chosen: tuple[tuple[int, int], ...]) -> None:
        nonlocal best_total, best_edges
        if total > best_total:
            best_total = total
            best_edges = chosen
        if idx == len(edges):
            return
        if total + _forest_relaxation(edges, idx, uf) <= best_total:
            return
        (a, b), wt = edges[idx]
        if wt > 0 and degrees[a] < k and degrees[b] < k and uf.find(a) != uf.find(b):
            inc = uf.copy()
            inc.union(a, b)
            degrees[a] += 1
            degrees[b] += 1
            search(idx + 1, inc, degrees, total + wt, chosen + ((a, b),))
            degrees[a] -= 1
            degrees[b] -= 1
        search(idx + 1, uf, degrees, total, chosen)

    search(0, _UnionFind(n), [0] * n, 0.0, ())
    return LearnResult(UndirectedGraph(w.base, frozenset(best_edges)), best_total)


def _spanning_relaxation(edges: list[tuple[tuple[int, int], float]], start: int,
                         uf: _UnionFind, missing: int) -> float | None:
    """Best completion to a spanning tree ignoring degrees, or None if impossible."""
    relax = uf.copy()
    bound = 0.0
    joined = 0
    for (a, b), wt in edges[start:]:
        if relax.union(a, b):
            bound += wt
            joined += 1
            if joined == missing:
                return bound
    return None


def degree_bounded_spanning_tree(w: WeightTable, k: int) -> LearnResult | None:
    """Exact maximum-weight spanning tree with degrees at most ``k``.

    Returns None when no such tree exists (a normal outcome, e.g. a star with
    k = 2).  Branch and bound over the weight-sorted edge list with a
    spanning-completion bound.
    """
    n = w.base.n
    if not 2 <= k < n - 1:
        raise ValueError(f"degree bound must satisfy 2 <= k < n - 1, got {k}")
    if n > DEGREE_SEARCH_CAP:
        raise SearchCapError(f"degree-bounded search capped at {DEGREE_SEARCH_CAP} nodes")
    edges = w.edges_by_weight()
    best: list = [None, ()]  # [total, edges] once a feasible tree is found

    def search(idx: int, uf: _UnionFind, degrees: list[int], total: float,
               count: int, chosen: tuple[tuple[int, int], ...]) -> None:
        if count == n - 1:
            if best[0] is None or total > best[0]:
                best[0] = total
                best[1] = chosen
            return
        if idx == len(edges):
            return
        bound = _spanning_relaxation(edges, idx, uf, n - 1 - count)
        if bound is None:
            return
        if best[0] is not None and total + bound <= best[0]:
            return
        (a, b), wt = edges[idx]
        if degrees[a] < k and degrees[b] < k and uf.find(a) != uf.find(b):
            inc = uf.copy()
            inc.union(a, b)
            degrees[a] += 1
            degrees[b] += 1
            search(idx + 1, inc, degrees, total + wt, count + 1, chosen + ((a, b),))
            degrees[a] -= 1
            degrees[b] -= 1
        search(idx + 1, uf, degrees, total, count, chosen)

    search(0, _UnionFind(n), [0] * n, 0.0, 0, ())
    if best[0] is None:
        return None
    return LearnResult(UndirectedGraph(w.base, frozenset(best[1])), best[0])


def _max_clique_size(graph: UndirectedGraph) -> int:
    size = 0
    for c in graph.cliques(min_size=1):
        size = max(size, c.bit_count())
    return size


def best_chordal_subgraph(objective, allowed: UndirectedGraph,
                          max_clique: int | None = None) -> LearnResult:
    """Exact best chordal subgraph of the allowed graph.

    ``objective`` is either a `CliqueObjective` (value = sum of clique
    weights) or a score oracle (value = score of an oriented extension minus
    the empty-graph score); for weights derived from a decomposable
    score-equivalent criterion the two agree.  Optionally restricts the
    maximum clique size.  Edge subsets are searched smallest first, so with
    an all-zero objective the empty graph is returned; in clique mode the
    remaining positive clique weights give an additive pruning bound.
    """
    base = allowed.base
    n = base.n
    clique_mode = isinstance(objective, CliqueObjective)
    if clique_mode:
        if objective.base != base:
            raise ValueError("objective and allowed graph use different variable sets")
        if n > CHORDAL_SEARCH_CAP:
            raise SearchCapError(f"chordal search capped at {CHORDAL_SEARCH_CAP} nodes")
    else:
        if objective.base != base:
            raise ValueError("oracle and allowed graph use different variable sets")
        if n > ENUMERATION_CAP:
            raise SearchCapError(f"chordal enumeration capped at {ENUMERATION_CAP} nodes")
        empty_score = objective.score(Dag(base, frozenset()))
    edges = allowed.edges_sorted()
    m = len(edges)
    edge_index = {e: i for i, e in enumerate(edges)}

    positive: list[tuple[int, float]] = []
    if clique_mode:
        # Positive-weight cliques realizable inside the allowed graph, with the
        # mask of edge indices each one needs.
        for t, wt in objective.positive_items():
            members = [i for i in range(n) if t >> i & 1]
            need = 0
            ok = True
            for x in range(len(members)):
                for y in range(x + 1, len(members)):
                    pair = (members[x], members[y])
                    if pair not in edge_index:
                        ok = False
                        break
                    need |= 1 << edge_index[pair]
                if not ok:
                    break
            if ok:
                positive.append((need, wt))

    def upper_bound(avail: int) -> float:
        return sum(wt for need, wt in positive if need & ~avail == 0)

    def evaluate(graph: UndirectedGraph) -> float:
        if clique_mode:
            return objective.evaluate(graph)
        oriented = consistent_extension(MixedGraph(base, frozenset(), graph.edges))
        return objective.score(oriented) - empty_score

    chordal_cache: dict[frozenset, bool] = {}
    best: list = [None, None]  # [objective, graph]

    def leaf(chosen: tuple[tuple[int, int], ...]) -> None:
        graph = UndirectedGraph(base, frozenset(chosen))
        key = graph.edges
        verdict = chordal_cache.get(key)
        if verdict is None:
            verdict = is_chordal(graph)
            chordal_cache[key] = verdict
        if not verdict:
            return
        if max_clique is not None and _max_clique_size(graph) > max_clique:
            return
        value = evaluate(graph)
        if best[0] is None or value > best[0]:
            best[0] = value
            best[1] = graph

    def search(idx: int, chosen: tuple[tuple[int, int], ...], avail: int) -> None:
        if idx == m:
            leaf(chosen)
            return
        if clique_mode and best[0] is not None and upper_bound(avail) <= best[0]:
            return
        search(idx + 1, chosen, avail & ~(1 << idx))
        search(idx + 1, chosen + (edges[idx],), avail)

    search(0, (), (1 << m) - 1)
    return LearnResult(best[1], best[0])


def clique_reduction(allowed: UndirectedGraph, k: int) -> CliqueObjective:
    """Objective whose chordal-subgraph optimum is positive iff the graph has a k-clique.

    Subsets smaller than ``k`` weigh zero, subsets of size at least ``k``
    weigh one; any positive values would do for the sign test, the unit
    weight is just the simplest choice.
    """
    n = allowed.base.n
    if not 2 <= k <= n:
        raise ValueError(f"clique size must satisfy 2 <= k <= n, got {k}")
    values = {t: 1.0 for t in masks_by_size(n, max(k, 2))}
    return CliqueObjective(allowed.base, values)
