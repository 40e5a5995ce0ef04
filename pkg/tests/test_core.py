import random

import pytest

from charimset import (
    CharVector,
    Dag,
    Imset,
    UndirectedGraph,
    VarSet,
    characteristic_direct,
    characteristic_imset,
    characteristic_of_chordal,
    extend_from_low_cardinality,
    markov_equivalent,
    masks_by_size,
    mobius_restore,
    portrait,
    standard_imset,
)
from charimset.core import bit_indices, submasks

from helpers import base_of, random_charvector, random_dag

ABC = VarSet(("a", "b", "c"))
ABCD = VarSet(("a", "b", "c", "d"))


def _imset_dict(u):
    return {mask: value for mask, value in u.items()}


class TestVarSet:
    def test_basic(self):
        assert ABC.n == 3
        assert ABC.full_mask == 0b111
        assert ABC.index("c") == 2
        assert ABC.mask_of(["a", "c"]) == 0b101
        assert ABC.names_of(0b110) == ("b", "c")

    def test_too_small(self):
        with pytest.raises(ValueError):
            VarSet(("x",))

    def test_too_large(self):
        with pytest.raises(ValueError):
            VarSet(tuple(f"v{i}" for i in range(21)))

    def test_duplicate_names(self):
        with pytest.raises(ValueError):
            VarSet(("a", "a", "b"))

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            ABC.index("z")


class TestSubsetHelpers:
    def test_masks_by_size_order(self):
        assert list(masks_by_size(3)) == [0, 1, 2, 4, 3, 5, 6, 7]
        assert list(masks_by_size(3, min_size=2)) == [3, 5, 6, 7]
        assert list(masks_by_size(4, 2, 2)) == [3, 5, 6, 9, 10, 12]

    def test_bit_indices(self):
        assert list(bit_indices(0b1011)) == [0, 1, 3]

    def test_submasks(self):
        assert set(submasks(0b101)) == {0b101, 0b100, 0b001, 0}


class TestImsetTypes:
    def test_sparse_zero_handling(self):
        u = Imset(ABC, {0b011: 1, 0b100: 0})
        assert u[0b100] == 0
        assert u[0b011] == 1
        assert u == Imset(ABC, {0b011: 1})
        assert u.total() == 1

    def test_bad_mask(self):
        with pytest.raises(ValueError):
            Imset(ABC, {0b1000: 1})

    def test_charvector_rejects_small_subsets(self):
        with pytest.raises(ValueError):
            CharVector(ABC, {0b001: 1})
        v = CharVector(ABC, {0b011: 1})
        with pytest.raises(ValueError):
            v[0b001]

    def test_charvector_dense_items(self):
        v = CharVector(ABC, {0b110: 1})
        assert list(v.dense_items()) == [(0b011, 0), (0b101, 0), (0b110, 1), (0b111, 0)]

    def test_restrict(self):
        v = CharVector(ABC, {0b011: 1, 0b111: 1})
        assert v.restrict(2) == CharVector(ABC, {0b011: 1})


class TestGraphTypes:
    def test_dag_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Dag(ABC, frozenset({(0, 0)}))

    def test_dag_rejects_two_cycle(self):
        with pytest.raises(ValueError):
            Dag(ABC, frozenset({(0, 1), (1, 0)}))

    def test_dag_rejects_cycle(self):
        with pytest.raises(ValueError):
            Dag(ABC, frozenset({(0, 1), (1, 2), (2, 0)}))

    def test_dag_parents(self):
        g = Dag(ABC, frozenset({(0, 2), (1, 2)}))
        assert g.parents_mask(2) == 0b011
        assert g.family_mask(2) == 0b111
        assert g.skeleton() == UndirectedGraph(ABC, frozenset({(0, 2), (1, 2)}))

    def test_undirected_normalization(self):
        h = UndirectedGraph(ABC, frozenset({(2, 0)}))
        assert h.edges == frozenset({(0, 2)})
        assert h.has_edge(0, 2) and h.has_edge(2, 0)
        assert h.degree(0) == 1

    def test_components(self):
        h = UndirectedGraph(ABCD, frozenset({(0, 1)}))
        assert h.components() == (0b0011, 0b0100, 0b1000)
        assert not h.is_connected()

    def test_cliques_of_triangle(self):
        tri = UndirectedGraph.complete(ABC)
        assert set(tri.cliques(min_size=2)) == {0b011, 0b101, 0b110, 0b111}


class TestStandardImset:
    def test_empty_graph(self):
        u = standard_imset(Dag(ABC))
        assert _imset_dict(u) == {0: 2, 0b001: -1, 0b010: -1, 0b100: -1, 0b111: 1}

    def test_immorality(self):
        u = standard_imset(Dag(ABC, frozenset({(0, 2), (1, 2)})))
        assert _imset_dict(u) == {0: 1, 0b001: -1, 0b010: -1, 0b011: 1}

    def test_chain(self):
        u = standard_imset(Dag(ABC, frozenset({(0, 1), (1, 2)})))
        assert _imset_dict(u) == {0b010: 1, 0b011: -1, 0b110: -1, 0b111: 1}

    def test_entries_sum_to_zero(self, universe4):
        assert all(standard_imset(g).total() == 0 for g in universe4.dags)


class TestPortrait:
    def test_portrait_of_immorality(self):
        p = portrait(standard_imset(Dag(ABC, frozenset({(0, 2), (1, 2)}))))
        assert list(p.dense_items()) == [(0b011, 1), (0b101, 0), (0b110, 0), (0b111, 0)]

    def test_zero_imset(self):
        assert portrait(Imset(ABC)) == CharVector(ABC)

    def test_delta_full_set(self):
        p = portrait(Imset(ABC, {0b111: 1}))
        assert all(v == 1 for _, v in p.dense_items())


class TestMobiusRestore:
    def test_roundtrip_standard_imsets(self, universe4):
        for g in universe4.dags:
            u = standard_imset(g)
            assert mobius_restore(portrait(u), 0) == u

    def test_zero_vector(self):
        assert mobius_restore(CharVector(ABC), 0) == Imset(ABC)

    def test_chain_roundtrip(self):
        u = standard_imset(Dag(ABC, frozenset({(0, 1), (1, 2)})))
        assert mobius_restore(portrait(u), 0) == u

    def test_restore_then_portrait_on_random_vectors(self):
        rng = random.Random(20260810)
        base = base_of(5)
        for _ in range(200):
            p = random_charvector(rng, base)
            total = rng.randint(-4, 4)
            restored = mobius_restore(p, total)
            assert portrait(restored) == p
            assert restored.total() == total

    def test_portrait_then_restore_on_adjusted_imsets(self):
        # Imsets whose singleton superset-sums vanish are exactly the ones the
        # zero-sum convention reproduces.
        rng = random.Random(99)
        base = base_of(4)
        for _ in range(100):
            values = {m: rng.randint(-3, 3)
                      for m in masks_by_size(4, 2) if rng.random() < 0.7}
            for i in range(4):
                bit = 1 << i
                values[bit] = -sum(v for m, v in values.items() if m & bit and m != bit)
            u = Imset(base, values)
            assert mobius_restore(portrait(u), u.total()) == u


class TestCharacteristicImset:
    def test_immorality(self):
        c = characteristic_imset(Dag(ABC, frozenset({(0, 2), (1, 2)})))
        assert list(c.dense_items()) == [(0b011, 0), (0b101, 1), (0b110, 1), (0b111, 1)]

    def test_chain(self):
        c = characteristic_imset(Dag(ABC, frozenset({(0, 1), (1, 2)})))
        assert list(c.dense_items()) == [(0b011, 1), (0b101, 0), (0b110, 1), (0b111, 0)]

    def test_complete_dag_all_ones(self):
        g = Dag(ABCD, frozenset((i, j) for i in range(4) for j in range(i + 1, 4)))
        assert all(v == 1 for _, v in characteristic_imset(g).dense_items())

    def test_entries_are_01_random(self):
        rng = random.Random(3)
        for n in range(4, 8):
            base = base_of(n)
            for _ in range(25):
                c = characteristic_imset(random_dag(rng, base, p=rng.uniform(0.2, 0.7)))
                assert all(v in (0, 1) for _, v in c.dense_items())


class TestCharacteristicDirect:
    def test_immorality_triple(self):
        c = characteristic_direct(Dag(ABC, frozenset({(0, 2), (1, 2)})))
        assert c[0b111] == 1

    def test_chain_triple(self):
        c = characteristic_direct(Dag(ABC, frozenset({(0, 1), (1, 2)})))
        assert c[0b111] == 0

    def test_nonadjacent_pair_is_zero(self):
        rng = random.Random(8)
        for _ in range(20):
            g = random_dag(rng, base_of(5))
            c = characteristic_direct(g)
            for a in range(5):
                for b in range(a + 1, 5):
                    if not g.adjacent(a, b):
                        assert c[(1 << a) | (1 << b)] == 0

    def test_agrees_with_portrait_route_exhaustive(self, universe4):
        for g in universe4.dags:
            assert characteristic_direct(g) == characteristic_imset(g)

    def test_agrees_with_portrait_route_random(self):
        rng = random.Random(17)
        for n in (5, 6, 7):
            base = base_of(n)
            for _ in range(20):
                g = random_dag(rng, base)
                assert characteristic_direct(g) == characteristic_imset(g)


class TestChordalCharacteristic:
    def test_path(self):
        path = UndirectedGraph(ABC, frozenset({(0, 1), (1, 2)}))
        c = characteristic_of_chordal(path)
        assert list(c.dense_items()) == [(0b011, 1), (0b101, 0), (0b110, 1), (0b111, 0)]

    def test_forest_is_edge_indicator(self):
        forest = UndirectedGraph(ABCD, frozenset({(0, 1), (2, 3)}))
        c = characteristic_of_chordal(forest)
        assert c.support() == (0b0011, 0b1100)

    def test_triangle_all_ones(self):
        c = characteristic_of_chordal(UndirectedGraph.complete(ABC))
        assert all(v == 1 for _, v in c.dense_items())

    def test_rejects_non_chordal(self):
        cycle = UndirectedGraph(ABCD, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}))
        with pytest.raises(ValueError):
            characteristic_of_chordal(cycle)


class TestMarkovEquivalent:
    def test_chain_vs_fork(self):
        chain = Dag(ABC, frozenset({(0, 1), (1, 2)}))
        fork = Dag(ABC, frozenset({(1, 0), (1, 2)}))
        assert markov_equivalent(chain, fork)

    def test_chain_vs_collider(self):
        chain = Dag(ABC, frozenset({(0, 1), (1, 2)}))
        collider = Dag(ABC, frozenset({(0, 2), (1, 2)}))
        assert not markov_equivalent(chain, collider)

    def test_reflexive(self):
        g = Dag(ABC, frozenset({(0, 1)}))
        assert markov_equivalent(g, g)

    def test_mismatched_base(self):
        with pytest.raises(ValueError):
            markov_equivalent(Dag(ABC), Dag(ABCD))

    def test_agrees_with_charvector_equality(self, universe3):
        dags = universe3.dags
        for g in dags:
            cg = characteristic_imset(g)
            for h in dags:
                assert markov_equivalent(g, h) == (cg == characteristic_imset(h))

    def test_pair_entries_are_skeleton(self):
        rng = random.Random(12)
        for _ in range(30):
            g = random_dag(rng, base_of(6))
            c = characteristic_imset(g)
            skel = g.skeleton()
            for a in range(6):
                for b in range(a + 1, 6):
                    assert c[(1 << a) | (1 << b)] == int(skel.has_edge(a, b))


class TestExtendFromLowCardinality:
    def test_complete_dag(self):
        g = Dag(ABCD, frozenset((i, j) for i in range(4) for j in range(i + 1, 4)))
        c = characteristic_imset(g)
        assert extend_from_low_cardinality(c.restrict(3)) == c

    def test_star_collider(self):
        # three arcs into d: exactly three qualifying triples, so the 4-set is 1
        g = Dag(ABCD, frozenset({(0, 3), (1, 3), (2, 3)}))
        c = characteristic_imset(g)
        assert c[ABCD.full_mask] == 1
        assert extend_from_low_cardinality(c.restrict(3)) == c
        assert extend_from_low_cardinality(c.restrict(3)) == characteristic_direct(g)

    def test_chain_four_nodes(self):
        g = Dag(ABCD, frozenset({(0, 1), (1, 2), (2, 3)}))
        c = characteristic_imset(g)
        assert all(v == 0 for m, v in c.dense_items() if m.bit_count() >= 4)
        assert extend_from_low_cardinality(c.restrict(3)) == c

    def test_exhaustive_n4(self, universe4):
        for key in universe4.classes:
            assert extend_from_low_cardinality(key.restrict(3)) == key

    def test_random_n5_n6(self):
        rng = random.Random(2)
        for n in (5, 6):
            base = base_of(n)
            for _ in range(40):
                c = characteristic_imset(random_dag(rng, base, p=rng.uniform(0.2, 0.8)))
                assert extend_from_low_cardinality(c.restrict(3)) == c


class TestClassCounts:
    def test_dedup_counts(self, universe3, universe4):
        assert (len(universe3.dags), len(universe3.classes)) == (25, 11)
        assert (len(universe4.dags), len(universe4.classes)) == (543, 185)
        from charimset import enumerate_dags

        u2 = enumerate_dags(2)
        assert (len(u2.dags), len(u2.classes)) == (3, 2)

    def test_dedup_by_fast_path_matches(self, universe3):
        keys = {characteristic_imset(g) for g in universe3.dags}
        assert len(keys) == 11
