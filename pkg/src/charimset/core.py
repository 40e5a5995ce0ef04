"""Subset-indexed integer vectors over a variable set, and the graphs they encode.

Node subsets are encoded as bitmasks over variable indices, so subset algebra
is plain integer arithmetic and every ordering ambiguity disappears: the
canonical iteration order over subsets is ascending by (cardinality, mask).

Two vector types live here.  An `Imset` is an integer vector indexed by *all*
subsets of the variable set (stored sparsely, absent means zero).  A
`CharVector` is an integer vector indexed by the subsets of size two or more;
for vectors built from a DAG its entries are always 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

MAX_VARIABLES = 20


def bit_indices(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` (including 0 and ``mask`` itself), descending."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def masks_by_size(n: int, min_size: int = 0, max_size: int | None = None) -> Iterator[int]:
    """Subset masks of {0..n-1} ascending by (cardinality, mask value)."""
    if max_size is None:
        max_size = n
    limit = 1 << n
    for size in range(min_size, max_size + 1):
        if size == 0:
            yield 0
            continue
        mask = (1 << size) - 1
        while mask < limit:
            yield mask
            # Gosper's hack: next larger mask with the same popcount.
            low = mask & -mask
            ripple = mask + low
            mask = ripple | (((mask ^ ripple) >> 2) // low)


@dataclass(frozen=True)
class VarSet:
    """Ordered set of variable labels; a variable's index is its position."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) < 2:
            raise ValueError("a variable set needs at least two variables")
        if len(self.names) > MAX_VARIABLES:
            raise ValueError(f"at most {MAX_VARIABLES} variables are supported")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.names[i] for i in bit_indices(mask))


def _check_mask(base: VarSet, mask: int) -> int:
    mask = int(mask)
    if not 0 <= mask <= base.full_mask:
        raise ValueError(f"subset mask {mask:#x} out of range for {base.n} variables")
    return mask


class Imset:
    """Integer vector indexed by all subsets of the base set.

    Stored sparsely: absent subsets have value zero.  Instances are treated
    as immutable values; equality and hashing consider only the nonzero
    entries.
    """

    __slots__ = ("base", "_values")

    def __init__(self, base: VarSet, values: Mapping[int, int] | None = None):
        self.base = base
        vals: dict[int, int] = {}
        for mask, value in (values or {}).items():
            mask = _check_mask(base, mask)
            value = int(value)
            if value:
                vals[mask] = value
        self._values = vals

    def __getitem__(self, mask: int) -> int:
        return self._values.get(_check_mask(self.base, mask), 0)

    def items(self) -> list[tuple[int, int]]:
        """Nonzero (mask, value) pairs in canonical order."""
        return sorted(self._values.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))

    def support(self) -> tuple[int, ...]:
        return tuple(mask for mask, _ in self.items())

    def total(self) -> int:
        return sum(self._values.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Imset):
            return NotImplemented
        return self.base == other.base and self._values == other._values

    def __hash__(self) -> int:
        return hash((self.base, frozenset(self._values.items())))

    def __repr__(self) -> str:
        entries = ", ".join(f"{set(self.base.names_of(m)) or '{}'}: {v}" for m, v in self.items())
        return f"Imset({entries})"


class CharVector:
    """Integer vector indexed by the subsets of size >= 2.

    Doubles as the storage for upper portraits (arbitrary integers) and for
    characteristic vectors of DAGs (entries 0/1).  Sparse like `Imset`.
    """

    __slots__ = ("base", "_values")

    def __init__(self, base: VarSet, values: Mapping[int, int] | None = None):
        self.base = base
        vals: dict[int, int] = {}
        for mask, value in (values or {}).items():
            mask = _check_mask(base, mask)
            if mask.bit_count() < 2:
                raise ValueError("characteristic vectors are indexed by subsets of size >= 2")
            value = int(value)
            if value:
                vals[mask] = value
        self._values = vals

    def __getitem__(self, mask: int) -> int:
        mask = _check_mask(self.base, mask)
        if mask.bit_count() < 2:
            raise ValueError("characteristic vectors are indexed by subsets of size >= 2")
        return self._values.get(mask, 0)

    def items(self) -> list[tuple[int, int]]:
        """Nonzero (mask, value) pairs in canonical order."""
        return sorted(self._values.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))

    def dense_items(self) -> Iterator[tuple[int, int]]:
        """All (mask, value) pairs for |T| >= 2 in canonical order, zeros included."""
        for mask in masks_by_size(self.base.n, 2):
            yield mask, self._values.get(mask, 0)

    def support(self) -> tuple[int, ...]:
        return tuple(mask for mask, _ in self.items())

    def restrict(self, max_size: int) -> "CharVector":
        """Copy keeping only the entries with |T| <= max_size."""
        return CharVector(
            self.base,
            {m: v for m, v in self._values.items() if m.bit_count() <= max_size},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CharVector):
            return NotImplemented
        return self.base == other.base and self._values == other._values

    def __hash__(self) -> int:
        return hash((self.base, frozenset(self._values.items())))

    def __repr__(self) -> str:
        entries = ", ".join(f"{set(self.base.names_of(m))}: {v}" for m, v in self.items())
        return f"CharVector({entries})"


@dataclass(frozen=True)
class Dag:
    """Acyclic directed graph; arcs are ordered index pairs (i, j) meaning i -> j."""

    base: VarSet
    arcs: frozenset[tuple[int, int]] = frozenset()
    _parents: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        arcs = frozenset((int(i), int(j)) for i, j in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        n = self.base.n
        parents = [0] * n
        for i, j in arcs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"arc ({i}, {j}) out of range")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if (j, i) in arcs:
                raise ValueError(f"nodes {i} and {j} are connected in both directions")
            parents[j] |= 1 << i
        object.__setattr__(self, "_parents", tuple(parents))
        # Acyclicity: repeatedly delete nodes whose remaining parents are gone.
        removed = 0
        full = self.base.full_mask
        progress = True
        while progress and removed != full:
            progress = False
            for v in range(n):
                if not removed >> v & 1 and parents[v] & ~removed == 0:
                    removed |= 1 << v
                    progress = True
        if removed != full:
            raise ValueError("arc set contains a directed cycle")

    @property
    def n(self) -> int:
        return self.base.n

    def parents_mask(self, i: int) -> int:
        return self._parents[i]

    def family_mask(self, i: int) -> int:
        return self._parents[i] | (1 << i)

    def adjacent(self, i: int, j: int) -> bool:
        return (i, j) in self.arcs or (j, i) in self.arcs

    def arcs_sorted(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.arcs))

    def skeleton(self) -> "UndirectedGraph":
        return UndirectedGraph(self.base, frozenset((min(i, j), max(i, j)) for i, j in self.arcs))


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph; edges are normalized index pairs (i, j) with i < j."""

    base: VarSet
    edges: frozenset[tuple[int, int]] = frozenset()
    _adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.base.n
        edges = set()
        adj = [0] * n
        for a, b in self.edges:
            a, b = int(a), int(b)
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) out of range")
            if a == b:
                raise ValueError(f"self-loop at node {a}")
            edges.add((min(a, b), max(a, b)))
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "_adj", tuple(adj))

    @classmethod
    def complete(cls, base: VarSet) -> "UndirectedGraph":
        return cls(base, frozenset((i, j) for i in range(base.n) for j in range(i + 1, base.n)))

    @property
    def n(self) -> int:
        return self.base.n

    def neighbors_mask(self, i: int) -> int:
        return self._adj[i]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._adj[i] >> j & 1)

    def degree(self, i: int) -> int:
        return self._adj[i].bit_count()

    def edges_sorted(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    def components(self) -> tuple[int, ...]:
        """Vertex masks of the connected components, ordered by lowest member."""
        seen = 0
        out = []
        for start in range(self.n):
            if seen >> start & 1:
                continue
            comp = 1 << start
            frontier = comp
            while frontier:
                nxt = 0
                for v in bit_indices(frontier):
                    nxt |= self._adj[v]
                frontier = nxt & ~comp
                comp |= nxt
            seen |= comp
            out.append(comp)
        return tuple(out)

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def cliques(self, min_size: int = 1) -> Iterator[int]:
        """Masks of all cliques with at least ``min_size`` vertices.

        Cliques are grown by ascending vertex index, so each one is produced
        exactly once and the overall order is deterministic.
        """
        adj = self._adj

        def grow(mask: int, cand: int) -> Iterator[int]:
            rest = cand
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                new = mask | low
                if new.bit_count() >= min_size:
                    yield new
                yield from grow(new, rest & adj[v])

        yield from grow(0, self.base.full_mask)


def standard_imset(g: Dag) -> Imset:
    """Signed combination of subset indicators that pins down g's equivalence class.

    The full set contributes +1 and the empty set -1; each node adds +1 at its
    parent set and -1 at parent set plus the node.  Opposing contributions
    cancel, so the result sums to zero and has support at most 2n + 2.
    """
    vals: dict[int, int] = {}

    def add(mask: int, delta: int) -> None:
        vals[mask] = vals.get(mask, 0) + delta

    add(g.base.full_mask, 1)
    add(0, -1)
    for i in range(g.base.n):
        pa = g.parents_mask(i)
        add(pa, 1)
        add(pa | (1 << i), -1)
    return Imset(g.base, vals)


def portrait(u: Imset) -> CharVector:
    """Superset sums of ``u``: entry at T is the sum of u over all X >= T (|T| >= 2)."""
    support = u.items()
    vals: dict[int, int] = {}
    for t in masks_by_size(u.base.n, 2):
        s = sum(value for mask, value in support if t & ~mask == 0)
        if s:
            vals[t] = s
    return CharVector(u.base, vals)


def mobius_restore(p: CharVector, total: int = 0) -> Imset:
    """Invert `portrait`, fixing the components it does not carry.

    The superset-sum system leaves the empty-set and singleton rows free; this
    uses the zero-sum convention: every singleton's superset sum is zero and
    the empty set's superset sum (= the sum of all entries of the result)
    equals ``total``.  Standard imsets satisfy both with ``total = 0``, so
    they round-trip exactly.
    """
    n = p.base.n
    size = 1 << n
    f = [0] * size
    for mask, value in p.items():
        f[mask] = value
    f[0] = int(total)
    # Invert the superset-sum (zeta) transform in place, one bit at a time.
    for b in range(n):
        bit = 1 << b
        for mask in range(size):
            if not mask & bit:
                f[mask] -= f[mask | bit]
    return Imset(p.base, {mask: v for mask, v in enumerate(f) if v})


def characteristic_imset(g: Dag) -> CharVector:
    """All-ones minus the portrait of g's standard imset; a 0-1 vector."""
    p = portrait(standard_imset(g))
    vals: dict[int, int] = {}
    for t in masks_by_size(g.base.n, 2):
        c = 1 - p[t]
        if c:
            vals[t] = c
    return CharVector(g.base, vals)


def characteristic_direct(g: Dag) -> CharVector:
    """Characteristic vector read straight off the parent sets.

    Entry at T is 1 exactly when some i in T has all of T \\ {i} among its
    parents -- equivalently T is a clique with a sink inside it.  Produces the
    same vector as `characteristic_imset` without going through the portrait.
    """
    ones: set[int] = set()
    for i in range(g.base.n):
        bit = 1 << i
        for sub in submasks(g.parents_mask(i)):
            if sub:
                ones.add(sub | bit)
    return CharVector(g.base, {t: 1 for t in ones})


def characteristic_of_chordal(h: UndirectedGraph) -> CharVector:
    """Characteristic vector of a chordal undirected graph: 1 exactly on its cliques.

    Defined through any immorality-free orientation of ``h``, which exists iff
    ``h`` is chordal; non-chordal input is rejected.
    """
    from .recon import is_chordal

    if not is_chordal(h):
        raise ValueError("graph is not chordal")
    return CharVector(h.base, {t: 1 for t in h.cliques(min_size=2)})


def markov_equivalent(g: Dag, h: Dag) -> bool:
    """True iff g and h have the same skeleton and the same immoralities."""
    if g.base != h.base:
        raise ValueError("graphs are over different variable sets")
    if g.skeleton() != h.skeleton():
        return False
    from .recon import immoralities

    return immoralities(g) == immoralities(h)


def extend_from_low_cardinality(partial: CharVector) -> CharVector:
    """Rebuild a full characteristic vector from its size-2 and size-3 entries.

    For |S| >= 4, ascending by cardinality, the entry at S becomes 1 exactly
    when at least three of its (|S|-1)-subsets already carry a 1.  For input
    that really is the low-cardinality part of a DAG's characteristic vector
    this reproduces the whole vector; anything else is garbage in, garbage out.
    """
    n = partial.base.n
    vals = {m: v for m, v in partial.items() if m.bit_count() <= 3}
    for size in range(4, n + 1):
        for s in masks_by_size(n, size, size):
            hits = 0
            for i in bit_indices(s):
                if vals.get(s & ~(1 << i), 0) == 1:
                    hits += 1
                    if hits == 3:
                        break
            if hits >= 3:
                vals[s] = 1
    return CharVector(partial.base, vals)
