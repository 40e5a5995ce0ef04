"""Recovering graphs from characteristic vectors: patterns, essential graphs, validation.

The pipeline is: read skeleton and immorality arcs off a candidate vector,
close the resulting pattern under the three orientation rules, extend the
essential graph to a witnessing DAG, and accept the vector iff the witness
reproduces it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    CharVector,
    Dag,
    UndirectedGraph,
    VarSet,
    bit_indices,
    characteristic_imset,
)

REASON_RANGE = "entries-out-of-range"
REASON_NOT_CHORDAL = "component-not-chordal"
REASON_NOT_EXTENDABLE = "no-consistent-extension"
REASON_MISMATCH = "imset-mismatch"


class ExtensionError(ValueError):
    """No DAG consistently extends the given mixed graph."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class MixedGraph:
    """Graph with both arcs and undirected edges; each node pair carries at most one."""

    base: VarSet
    arcs: frozenset[tuple[int, int]] = frozenset()
    undirected: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        n = self.base.n
        arcs = frozenset((int(i), int(j)) for i, j in self.arcs)
        und = frozenset((min(int(a), int(b)), max(int(a), int(b))) for a, b in self.undirected)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "undirected", und)
        used = set()
        for i, j in arcs:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValueError(f"bad arc ({i}, {j})")
            pair = (min(i, j), max(i, j))
            if pair in used:
                raise ValueError(f"nodes {i} and {j} carry more than one connection")
            used.add(pair)
        for a, b in und:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise ValueError(f"bad edge ({a}, {b})")
            if (a, b) in used:
                raise ValueError(f"nodes {a} and {b} carry more than one connection")
            used.add((a, b))

    @property
    def n(self) -> int:
        return self.base.n

    def adjacent(self, i: int, j: int) -> bool:
        pair = (min(i, j), max(i, j))
        return pair in self.undirected or (i, j) in self.arcs or (j, i) in self.arcs

    def arc_parents(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(a for a, b in self.arcs if b == i))

    def skeleton(self) -> UndirectedGraph:
        pairs = {(min(i, j), max(i, j)) for i, j in self.arcs} | set(self.undirected)
        return UndirectedGraph(self.base, frozenset(pairs))

    def is_fully_undirected(self) -> bool:
        return not self.arcs


@dataclass(frozen=True)
class Immorality:
    """Collider a -> c <- b with a, b non-adjacent; the outer pair is unordered."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if len({self.a, self.b, self.c}) != 3:
            raise ValueError("an immorality needs three distinct nodes")
        if self.a > self.b:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)


def immoralities(g: Dag) -> frozenset[Immorality]:
    """All induced colliders a -> c <- b with a and b non-adjacent."""
    found = set()
    for c in range(g.n):
        parents = tuple(bit_indices(g.parents_mask(c)))
        for x in range(len(parents)):
            for y in range(x + 1, len(parents)):
                a, b = parents[x], parents[y]
                if not g.adjacent(a, b):
                    found.add(Immorality(a, b, c))
    return frozenset(found)


def pattern(g: Dag) -> MixedGraph:
    """Skeleton of g with exactly the immorality arcs kept directed."""
    directed = set()
    for imm in immoralities(g):
        directed.add((imm.a, imm.c))
        directed.add((imm.b, imm.c))
    directed_pairs = {(min(i, j), max(i, j)) for i, j in directed}
    undirected = frozenset(e for e in g.skeleton().edges if e not in directed_pairs)
    return MixedGraph(g.base, frozenset(directed), undirected)


def pattern_from_charvector(v: CharVector) -> MixedGraph:
    """Candidate pattern read off a characteristic vector.

    The pair entries give the skeleton; an edge a-b gets directed a -> b when
    some witness i has the triple {a, b, i} at 1 while the pair {a, i} is 0.
    For a genuine characteristic vector this reproduces the pattern of any
    generating DAG.  Invalid vectors still yield some deterministic candidate
    (conflicting orientation evidence resolves first-come), which downstream
    validation will reject.
    """
    n = v.base.n
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if v[(1 << a) | (1 << b)] == 1]
    edge_set = set(edges)
    arcs: set[tuple[int, int]] = set()
    for a, b in sorted(edge_set | {(b, a) for a, b in edge_set}):
        if (b, a) in arcs:
            continue
        pair = (1 << a) | (1 << b)
        for i in range(n):
            wit = 1 << i
            if wit & pair:
                continue
            if v[pair | wit] == 1 and v[(1 << a) | wit] == 0:
                arcs.add((a, b))
                break
    arc_pairs = {(min(i, j), max(i, j)) for i, j in arcs}
    undirected = frozenset(e for e in edge_set if e not in arc_pairs)
    return MixedGraph(v.base, frozenset(arcs), undirected)


def _first_orientation(arcs: set[tuple[int, int]], und: set[tuple[int, int]],
                       adjacent) -> tuple[int, int] | None:
    """First edge orientation forced by the rules, scanning in canonical order.

    Rule 1: a -> b and b - c with a, c non-adjacent forces b -> c.
    Rule 2: a -> b -> c with a - c forces a -> c.
    Rule 3: a - b, a - c, a - d with c -> b, d -> b and c, d non-adjacent
    forces a -> b.
    """
    ordered = sorted(und)
    # Rule 1
    for x, y in ordered:
        for b, c in ((x, y), (y, x)):
            for a, t in sorted(arcs):
                if t == b and a != c and not adjacent(a, c):
                    return b, c
    # Rule 2
    for x, y in ordered:
        for a, c in ((x, y), (y, x)):
            for p, b in sorted(arcs):
                if p == a and (b, c) in arcs:
                    return a, c
    # Rule 3
    for x, y in ordered:
        for a, b in ((x, y), (y, x)):
            into_b = [c for c, t in arcs if t == b]
            for i in range(len(into_b)):
                for j in range(i + 1, len(into_b)):
                    c, d = into_b[i], into_b[j]
                    if (min(a, c), max(a, c)) in und and (min(a, d), max(a, d)) in und \
                            and not adjacent(c, d):
                        return a, b
    return None


def meek_closure(p: MixedGraph) -> MixedGraph:
    """Exhaustively apply the three orientation rules to a pattern.

    For the pattern of a DAG the fixpoint is its essential graph, and it does
    not depend on the order in which rules fire; the fixed scan order here
    only makes traces reproducible.
    """
    arcs = set(p.arcs)
    und = set(p.undirected)

    def adjacent(i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in und or (i, j) in arcs or (j, i) in arcs

    while True:
        forced = _first_orientation(arcs, und, adjacent)
        if forced is None:
            break
        i, j = forced
        und.discard((min(i, j), max(i, j)))
        arcs.add((i, j))
    return MixedGraph(p.base, frozenset(arcs), frozenset(und))


def essential_graph(g: Dag) -> MixedGraph:
    """Unique mixed-graph representative of g's Markov equivalence class."""
    return meek_closure(pattern(g))


def _mcs_order(adj: tuple[int, ...], vertices: int) -> list[int]:
    """Maximum-cardinality search over the given vertex mask, ties to lowest index."""
    weight = {v: 0 for v in bit_indices(vertices)}
    order: list[int] = []
    remaining = vertices
    while remaining:
        v = max(bit_indices(remaining), key=lambda u: (weight[u], -u))
        order.append(v)
        remaining &= ~(1 << v)
        for u in bit_indices(adj[v] & remaining):
            weight[u] += 1
    return order


def _mcs_is_perfect(adj: tuple[int, ...], order: list[int]) -> bool:
    """Check that each vertex's earlier MCS neighbors form a clique."""
    pos = {v: k for k, v in enumerate(order)}
    earlier = 0
    for v in order:
        back = adj[v] & earlier
        if back.bit_count() >= 2:
            u = max(bit_indices(back), key=pos.__getitem__)
            if back & ~(adj[u] | (1 << u)):
                return False
        earlier |= 1 << v
    return True


def is_chordal(h: UndirectedGraph) -> bool:
    """True iff every cycle of length at least four has a chord."""
    adj = tuple(h.neighbors_mask(i) for i in range(h.n))
    order = _mcs_order(adj, h.base.full_mask)
    return _mcs_is_perfect(adj, order)


def perfect_elimination_ordering(h: UndirectedGraph) -> tuple[int, ...] | None:
    """A perfect elimination ordering of ``h``, or None when ``h`` is not chordal.

    Computed as the reverse of a maximum-cardinality search order.
    """
    adj = tuple(h.neighbors_mask(i) for i in range(h.n))
    order = _mcs_order(adj, h.base.full_mask)
    if not _mcs_is_perfect(adj, order):
        return None
    return tuple(reversed(order))


def consistent_extension(e: MixedGraph) -> Dag:
    """A DAG whose pattern closes back to ``e``.

    Arcs of ``e`` are kept; every undirected component is oriented along its
    maximum-cardinality search order, which on a chordal component creates
    neither cycles nor immoralities.  Raises `ExtensionError` when a component
    is not chordal or the combined orientation is cyclic (then ``e`` was not
    an essential graph).
    """
    arcs = set(e.arcs)
    und_graph = UndirectedGraph(e.base, e.undirected)
    adj = tuple(und_graph.neighbors_mask(i) for i in range(e.n))
    for comp in und_graph.components():
        if comp.bit_count() < 2:
            continue
        order = _mcs_order(adj, comp)
        if not _mcs_is_perfect(adj, order):
            raise ExtensionError(REASON_NOT_CHORDAL)
        pos = {v: k for k, v in enumerate(order)}
        for a, b in und_graph.edges:
            if comp >> a & 1 and comp >> b & 1:
                arcs.add((a, b) if pos[a] < pos[b] else (b, a))
    try:
        return Dag(e.base, frozenset(arcs))
    except ValueError as exc:
        raise ExtensionError(REASON_NOT_EXTENDABLE) from exc


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of testing whether a vector is the characteristic vector of some DAG."""

    accepted: bool
    dag: Dag | None = None
    reason: str | None = None


def validate_characteristic_vector(v: CharVector) -> ValidationResult:
    """Decide whether ``v`` is the characteristic vector of some DAG.

    Builds a candidate pattern, closes it, extends it to a DAG, and accepts
    exactly when that witness reproduces ``v``.  Rejection is a normal result
    and carries a reason code.
    """
    if any(value not in (0, 1) for _, value in v.items()):
        return ValidationResult(False, reason=REASON_RANGE)
    candidate = meek_closure(pattern_from_charvector(v))
    try:
        witness = consistent_extension(candidate)
    except ExtensionError as exc:
        return ValidationResult(False, reason=exc.reason)
    if characteristic_imset(witness) == v:
        return ValidationResult(True, dag=witness)
    return ValidationResult(False, reason=REASON_MISMATCH)
