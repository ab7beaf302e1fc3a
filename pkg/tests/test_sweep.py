"""Tests for weight sampling, interval tuples and the tree sweep."""

from fractions import Fraction
from itertools import combinations
from math import comb

import networkx as nx
import numpy as np
import pytest

from ipcg_search.core.graph import LabeledGraph
from ipcg_search.search.config import CampaignConfig, WeightRange
from ipcg_search.search.sweep import (
    DistinctDistances,
    IntervalTuple,
    SweepTables,
    build_graph,
    distinct_distances,
    edge_count_of,
    enumerate_interval_tuples,
    sample_weights,
    sweep,
)
from ipcg_search.trees.enumeration import gen_binary_trees
from ipcg_search.trees.weights import WeightAssignment, leaf_distances, to_networkx


@pytest.fixture
def cfg() -> CampaignConfig:
    return CampaignConfig(
        k=2,
        leaf_range=WeightRange(1, 5),
        internal_range=WeightRange(10, 20),
        time_budget=1.0,
    )


@pytest.fixture
def star_distances():
    """The 3-leaf star with pendant weights 1, 2, 3: d12=3, d13=4, d23=5."""
    (star,) = gen_binary_trees(3)
    return leaf_distances(star, WeightAssignment((1, 2, 3)))


class TestSampleWeights:
    """Tests for sample_weights."""

    def test_ranges(self, cfg):
        """Test leaf and internal weights fall in their ranges."""
        rng = np.random.default_rng(0)
        for _ in range(50):
            w = sample_weights(rng, 8, cfg)
            assert len(w) == 13
            assert all(1 <= v <= 5 for v in w.leaf_weights(8))
            assert all(10 <= v <= 20 for v in w.internal_weights(8))

    def test_reproducible(self, cfg):
        """Test equal seeds give equal samples."""
        a = sample_weights(np.random.default_rng([4, 0, 1]), 9, cfg)
        b = sample_weights(np.random.default_rng([4, 0, 1]), 9, cfg)
        assert a == b

    def test_bounds_inclusive(self):
        """Test a one-value range always yields that value."""
        cfg = CampaignConfig(
            k=1, leaf_range=WeightRange(7, 7), internal_range=WeightRange(3, 3), time_budget=1.0
        )
        w = sample_weights(np.random.default_rng(1), 5, cfg)
        assert w.weights == (7, 7, 7, 7, 7, 3, 3)

    def test_too_few_leaves(self, cfg):
        """Test n >= 3."""
        with pytest.raises(ValueError):
            sample_weights(np.random.default_rng(0), 2, cfg)


class TestDistinctDistances:
    """Tests for distinct distances and prefix sums."""

    def test_star(self, star_distances):
        """Test values, multiplicities and prefix sums."""
        dd = distinct_distances(star_distances)
        assert dd.values == (3, 4, 5)
        assert dd.multiplicity == (1, 1, 1)
        assert dd.prefix == (0, 1, 2, 3)
        assert dd.ell == 3
        assert dd.pair_count == 3

    def test_repeated_distances(self):
        """Test equal distances are grouped."""
        (tree,) = gen_binary_trees(4)
        dd = distinct_distances(leaf_distances(tree, WeightAssignment((1, 1, 1, 1, 1))))
        assert dd.values == (2, 3)
        assert dd.multiplicity == (2, 4)

    def test_validation(self):
        """Test inconsistent data is rejected."""
        with pytest.raises(ValueError):
            DistinctDistances((3, 3), (1, 1), (0, 1, 2))
        with pytest.raises(ValueError):
            DistinctDistances((3,), (1, 1), (0, 1))


class TestIntervalTuples:
    """Tests for IntervalTuple and its enumeration."""

    @pytest.mark.parametrize("indices", [(), (1,), (0, 1), (2, 1), (1, 2, 2, 3)])
    def test_invalid(self, indices):
        """Test empty, odd, zero-based, reversed and overlapping tuples."""
        with pytest.raises(ValueError):
            IntervalTuple(indices)

    def test_blocks_and_intervals(self, star_distances):
        """Test half-integer intervals around the chosen distances."""
        dd = distinct_distances(star_distances)
        t = IntervalTuple((1, 1, 3, 3))
        assert t.k == 2
        assert list(t.blocks()) == [(1, 1), (3, 3)]
        assert t.intervals(dd) == [
            (Fraction(5, 2), Fraction(7, 2)),
            (Fraction(9, 2), Fraction(11, 2)),
        ]

    @pytest.mark.parametrize("ell", [1, 2, 4, 7])
    def test_counts(self, ell):
        """Test the number of tuples for k = 1 and k = 2."""
        one = comb(ell + 1, 2)
        two = comb(ell + 2, 4)
        assert sum(1 for _ in enumerate_interval_tuples(ell, 1)) == one
        assert sum(1 for _ in enumerate_interval_tuples(ell, 2, exact=True)) == two
        assert sum(1 for _ in enumerate_interval_tuples(ell, 2)) == one + two

    def test_order(self):
        """Test single intervals come first, each group lexicographic."""
        tuples = [t.indices for t in enumerate_interval_tuples(2, 2)]
        assert tuples == [(1, 1), (1, 2), (2, 2), (1, 1, 2, 2)]

    def test_invalid_arguments(self):
        """Test ell and k must be positive."""
        with pytest.raises(ValueError):
            list(enumerate_interval_tuples(0, 1))
        with pytest.raises(ValueError):
            list(enumerate_interval_tuples(3, 0))


class TestGraphs:
    """Tests for edge counts and graph construction."""

    def test_edge_count_and_graph(self, star_distances):
        """Test the graph joining pairs at distance 3 or 5."""
        dd = distinct_distances(star_distances)
        t = IntervalTuple((1, 1, 3, 3))
        g = build_graph(star_distances, t, dd)
        assert g.edges == ((1, 2), (2, 3))
        assert edge_count_of(t, dd) == 2
        assert edge_count_of(IntervalTuple((1, 3)), dd) == 3

    def test_tuple_exceeds_ell(self, star_distances):
        """Test indices past ell are rejected."""
        dd = distinct_distances(star_distances)
        with pytest.raises(ValueError):
            edge_count_of(IntervalTuple((2, 4)), dd)
        with pytest.raises(ValueError):
            build_graph(star_distances, IntervalTuple((2, 4)), dd)

    def test_tables_match_build_graph(self):
        """Test the cumulative tables agree with direct construction."""
        rng = np.random.default_rng(2)
        tree = gen_binary_trees(6)[1]
        d = leaf_distances(tree, WeightAssignment.of(rng.integers(1, 6, size=tree.edge_count)))
        dd = distinct_distances(d)
        tables = SweepTables(d.values, 6)
        assert tables.dd == dd
        for t in enumerate_interval_tuples(dd.ell, 2):
            g = build_graph(d, t, dd)
            assert tables.mask(t) == g.pair_mask
            assert tables.rows(t) == g.adjacency
            assert edge_count_of(t, dd) == g.edge_count


def brute_force_masks(n: int, k: int, tree_graph: nx.Graph) -> set[int]:
    """Pair masks of every placement of at most k disjoint integer ranges."""
    pairs = list(combinations(range(1, n + 1), 2))
    dist = {(a, b): nx.shortest_path_length(tree_graph, a, b, weight="weight") for a, b in pairs}
    top = max(dist.values())
    ranges = [
        (lo, hi, LabeledGraph.from_edge_list(n, (p for p in pairs if lo <= dist[p] <= hi)).pair_mask)
        for lo in range(top + 1)
        for hi in range(lo, top + 1)
    ]
    masks = {mask for _, _, mask in ranges}
    if k == 2:
        masks |= {m1 | m2 for _, h1, m1 in ranges for l2, _, m2 in ranges if l2 > h1}
    masks.discard(0)
    return masks


class TestBruteForce:
    """Sweep results against every interval placement."""

    def test_random_instances(self):
        """Test 100 random trees, weights and k against the brute force."""
        rng = np.random.default_rng(17)
        for _ in range(100):
            n = int(rng.integers(3, 7))
            k = int(rng.integers(1, 3))
            trees = gen_binary_trees(n)
            tree = trees[int(rng.integers(0, len(trees)))]
            w = WeightAssignment.of(rng.integers(1, 5, size=tree.edge_count))
            d = leaf_distances(tree, w)

            found = {c.mask for c in sweep(d.values, n, k, range(comb(n, 2) + 1))}
            assert found == brute_force_masks(n, k, to_networkx(tree, w))

            dd = distinct_distances(d)
            for t in enumerate_interval_tuples(dd.ell, k):
                assert edge_count_of(t, dd) == build_graph(d, t, dd).edge_count


class TestSweep:
    """Tests for the per-tree sweep."""

    def test_star_all_graphs(self, star_distances):
        """Test the six k=1 tuples give six distinct graphs."""
        candidates = list(sweep(star_distances.values, 3, 1, range(4)))
        assert len(candidates) == 6
        assert len({c.mask for c in candidates}) == 6

    def test_edge_count_filter(self, star_distances):
        """Test tuples with unwanted edge counts are skipped."""
        candidates = list(sweep(star_distances.values, 3, 1, {1}))
        assert [c.interval_tuple.indices for c in candidates] == [(1, 1), (2, 2), (3, 3)]
        assert all(c.edge_count == 1 for c in candidates)

    def test_duplicates_dropped(self):
        """Test tuples building the same graph yield one candidate."""
        (tree,) = gen_binary_trees(4)
        d = leaf_distances(tree, WeightAssignment((1, 1, 1, 1, 1)))
        candidates = list(sweep(d.values, 4, 2, range(7)))
        assert [c.interval_tuple.indices for c in candidates] == [(1, 1), (1, 2), (2, 2)]

    def test_rows_match_masks(self):
        """Test candidate rows describe the candidate mask."""
        rng = np.random.default_rng(9)
        tree = gen_binary_trees(7)[0]
        d = leaf_distances(tree, WeightAssignment.of(rng.integers(1, 9, size=tree.edge_count)))
        for c in sweep(d.values, 7, 2, range(22)):
            g = LabeledGraph(7, c.rows)
            assert g.pair_mask == c.mask
            assert g.edge_count == c.edge_count
