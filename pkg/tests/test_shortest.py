"""Composite-weight shortest paths: the tie-break order and the naive evaluator."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from stackspt.errors import UnreachableVertexError, ValidationError
from stackspt.instance import Edge, Fixed, Instance, Priceable, PriceFunction
from stackspt.rational import INF
from stackspt.shortest import (
    UNREACHABLE_WEIGHT,
    CompositeWeight,
    ZERO_WEIGHT,
    chi,
    chi_sum,
    composite_weight,
    fixed_cost_sssp,
    last_priceable_labels,
    lex_dijkstra,
    naive_revenue,
    _run_packed,
    _run_tuples,
)
from strategies import instances, priced_instances


def chain(*kinds, demand=None):
    """Path instance 0 -> 1 -> ... with the given edge kinds."""
    n = len(kinds) + 1
    edges = tuple(Edge(i, i + 1, kind) for i, kind in enumerate(kinds))
    return Instance(n=n, root=0, edges=edges, demand=tuple(demand or (1,) * n))


class TestChi:
    def test_single_edges(self):
        assert chi(Edge(0, 1, Fixed(5))) == 0
        assert chi(Edge(0, 1, Priceable(1))) == 2
        assert chi(Edge(0, 1, Priceable(3))) == 8
        assert chi(Edge(0, 1, Priceable(16))) == 65536

    def test_sum_is_injective_on_label_sets(self):
        k = 8
        values = set()
        for size in range(k + 1):
            for subset in itertools.combinations(range(1, k + 1), size):
                values.add(chi_sum(subset))
        assert len(values) == 2**k

    def test_larger_top_label_dominates(self):
        # whichever set holds the largest differing label has the bigger signature
        assert chi_sum({3}) > chi_sum({1, 2})
        assert chi_sum({4}) > chi_sum({1, 2, 3})


class TestCompositeWeight:
    def test_edge_weights(self):
        prices = PriceFunction((3, Fraction(1, 2)))
        assert composite_weight(Edge(0, 1, Fixed(7)), prices) == (7, 0, 0)
        assert composite_weight(Edge(0, 1, Priceable(1)), prices) == (3, -3, -2)
        assert composite_weight(Edge(0, 1, Priceable(2)), prices) == (
            Fraction(1, 2),
            Fraction(-1, 2),
            -4,
        )

    def test_lexicographic_order(self):
        # cheaper first
        assert CompositeWeight(2, 0, 0) < CompositeWeight(3, -5, -8)
        # among equal cost, higher price first
        assert CompositeWeight(5, -3, 0) < CompositeWeight(5, -2, -8)
        # among equal cost and price, higher signature first
        assert CompositeWeight(5, -3, -4) < CompositeWeight(5, -3, -2)

    def test_componentwise_addition(self):
        total = CompositeWeight(2, -1, -2) + CompositeWeight(3, 0, 0)
        assert total == CompositeWeight(5, -1, -2)
        assert ZERO_WEIGHT + total == total
        assert total.price_paid == 1


class TestTieBreaks:
    def test_priceable_wins_cost_tie(self):
        # two routes of cost 2 to vertex 2; the priced one is preferred
        inst = Instance(
            n=3,
            root=0,
            edges=(Edge(0, 1, Fixed(1)), Edge(1, 2, Fixed(1)), Edge(0, 2, Priceable(1))),
            demand=(1, 1, 1),
        )
        spt = lex_dijkstra(inst, PriceFunction((2,)))
        assert spt.dist[2] == CompositeWeight(2, -2, -2)
        assert spt.parent_edge[2] == 2
        assert naive_revenue(inst, PriceFunction((2,))) == 2

    def test_priceable_loses_when_strictly_costlier(self):
        inst = Instance(
            n=3,
            root=0,
            edges=(Edge(0, 1, Fixed(1)), Edge(1, 2, Fixed(1)), Edge(0, 2, Priceable(1))),
            demand=(1, 1, 1),
        )
        spt = lex_dijkstra(inst, PriceFunction((3,)))
        assert spt.dist[2] == CompositeWeight(2, 0, 0)
        assert naive_revenue(inst, PriceFunction((3,))) == 0

    def test_signature_breaks_price_tie(self):
        # parallel priceable edges at the same price: larger label wins
        inst = Instance(
            n=3,
            root=0,
            edges=(
                Edge(0, 2, Priceable(1)),
                Edge(0, 2, Priceable(2)),
                Edge(0, 1, Fixed(1)),
            ),
            demand=(1, 1, 1),
        )
        spt = lex_dijkstra(inst, PriceFunction((2, 2)))
        assert spt.dist[2] == CompositeWeight(2, -2, -4)
        assert last_priceable_labels(inst, spt)[2] == 2
        assert naive_revenue(inst, PriceFunction((2, 2))) == 2

    def test_price_paid_and_path(self):
        inst = chain(Priceable(1), Fixed(1), Priceable(2), Fixed(1))
        prices = PriceFunction((2, Fraction(5, 2)))
        spt = lex_dijkstra(inst, prices)
        assert spt.price_paid(4) == Fraction(9, 2)
        assert spt.tree_path_edges(inst, 4) == (0, 1, 2, 3)
        assert last_priceable_labels(inst, spt) == (None, 1, 1, 2, 2)
        assert naive_revenue(inst, prices) == 2 + 2 + Fraction(9, 2) + Fraction(9, 2)


class TestAgainstPathEnumeration:
    @given(priced_instances(max_n=6, max_extra=8))
    def test_distances_match_brute_force(self, case):
        inst, prices = case
        source = inst.root
        best = oracles.min_composite_by_path_enumeration(inst, prices, source)
        spt = lex_dijkstra(inst, prices, source)
        for v in range(inst.n):
            if best[v] is None:
                assert spt.dist[v] == UNREACHABLE_WEIGHT
            else:
                assert spt.dist[v] == CompositeWeight(*best[v])

    @given(priced_instances(max_n=6, max_extra=8), st.integers(min_value=0, max_value=5))
    def test_distances_from_other_sources(self, case, source_pick):
        inst, prices = case
        source = source_pick % inst.n
        best = oracles.min_composite_by_path_enumeration(inst, prices, source)
        spt = lex_dijkstra(inst, prices, source)
        for v in range(inst.n):
            expected = UNREACHABLE_WEIGHT if best[v] is None else CompositeWeight(*best[v])
            assert spt.dist[v] == expected


class TestCoreAgreement:
    @given(priced_instances(integer_only=True, max_n=10, max_extra=16))
    def test_packed_equals_tuples(self, case):
        inst, prices = case
        packed_dist, packed_parent, m1, m2, pcap, chicap = _run_packed(
            inst, prices, inst.root
        )
        tuple_dist, _ = _run_tuples(inst, prices, inst.root)
        for v in range(inst.n):
            if isinstance(packed_dist[v], float):
                assert tuple_dist[v] is None
                continue
            d = packed_dist[v]
            low = d % m1
            decoded = (d // m1, (low // m2) - pcap, (low % m2) - chicap)
            assert decoded == tuple_dist[v]

    @given(priced_instances(integer_only=True, max_n=10, max_extra=16))
    def test_dispatch_uses_packed_results(self, case):
        inst, prices = case
        # public entry point must agree with the general core as well
        spt = lex_dijkstra(inst, prices)
        dist_raw, _ = _run_tuples(inst, prices, inst.root)
        for v in range(inst.n):
            expected = (
                UNREACHABLE_WEIGHT if dist_raw[v] is None else CompositeWeight(*dist_raw[v])
            )
            assert spt.dist[v] == expected


class TestPermutationInvariance:
    @given(priced_instances(max_n=8, max_extra=10), st.randoms(use_true_random=False))
    def test_distances_and_classification(self, case, rng):
        inst, prices = case
        order = list(range(inst.m))
        rng.shuffle(order)
        permuted = Instance(
            n=inst.n,
            root=inst.root,
            edges=tuple(inst.edges[j] for j in order),
            demand=inst.demand,
        )
        a = lex_dijkstra(inst, prices)
        b = lex_dijkstra(permuted, prices)
        assert a.dist == b.dist
        assert last_priceable_labels(inst, a) == last_priceable_labels(permuted, b)
        assert naive_revenue(inst, prices) == naive_revenue(permuted, prices)


class TestFixedCostSssp:
    @given(instances(max_n=12, max_extra=20), st.integers(min_value=0, max_value=11))
    def test_matches_bellman_ford(self, inst, source_pick):
        source = source_pick % inst.n
        assert list(fixed_cost_sssp(inst, source)) == oracles.bellman_ford_fixed(
            inst, source
        )

    def test_priceable_edges_are_ignored(self):
        inst = chain(Priceable(1), Fixed(4))
        d = fixed_cost_sssp(inst, 0)
        assert d[0] == 0 and d[1] is INF and d[2] is INF
        assert fixed_cost_sssp(inst, 1) == (INF, 0, 4)

    def test_source_out_of_range(self):
        inst = chain(Fixed(1))
        with pytest.raises(ValidationError):
            fixed_cost_sssp(inst, 9)


class TestNaiveRevenue:
    def test_matches_exhaustive_tree_maximum(self):
        # revenue is the max over every plain shortest path tree
        inst = Instance(
            n=3,
            root=0,
            edges=(Edge(0, 1, Fixed(1)), Edge(1, 2, Fixed(1)), Edge(0, 2, Priceable(1))),
            demand=(1, 1, 1),
        )
        prices = PriceFunction((2,))
        assert naive_revenue(inst, prices) == oracles.max_spt_revenue(inst, prices) == 2

    @settings(max_examples=60)
    @given(priced_instances(max_n=6, max_extra=6))
    def test_matches_exhaustive_tree_maximum_random(self, case):
        inst, prices = case
        try:
            expected = oracles.max_spt_revenue(inst, prices, cap=50_000)
        except ValueError:
            return  # too many trees to enumerate; other examples cover it
        assert naive_revenue(inst, prices) == expected

    def test_unreachable_demand_raises(self):
        inst = Instance(n=2, root=0, edges=(), demand=(1, 1))
        with pytest.raises(UnreachableVertexError):
            naive_revenue(inst, PriceFunction(()))

    def test_unreachable_zero_demand_is_fine(self):
        inst = Instance(n=2, root=0, edges=(), demand=(1, 0))
        assert naive_revenue(inst, PriceFunction(())) == 0

    def test_price_count_must_match(self):
        inst = chain(Priceable(1))
        with pytest.raises(ValidationError):
            naive_revenue(inst, PriceFunction((1, 2)))

    @given(priced_instances(max_n=8, max_extra=10))
    def test_consistent_with_tree_distances(self, case):
        inst, prices = case
        spt = lex_dijkstra(inst, prices)
        expected = sum(
            inst.demand[v] * spt.price_paid(v)
            for v in range(inst.n)
            if spt.reachable(v)
        )
        assert naive_revenue(inst, prices) == expected

    @given(priced_instances(max_n=8, max_extra=10))
    def test_exact_type(self, case):
        inst, prices = case
        value = naive_revenue(inst, prices)
        assert isinstance(value, (int, Fraction))
