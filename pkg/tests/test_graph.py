"""Tests for labeled graphs, colorings and edge partitions."""

import pytest

from ipcg_search.core.graph import (
    EdgePartition,
    LabeledGraph,
    VertexColoring,
    enumerate_graphs,
    from_edge_list,
    pair_index,
    partition_by_edges,
    vertex_pairs,
)


class TestVertexPairs:
    """Tests for pair ordering."""

    def test_lexicographic_order(self):
        """Test pairs come in (1,2), (1,3), ... order."""
        assert vertex_pairs(4) == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

    def test_pair_index_matches_position(self):
        """Test pair_index agrees with vertex_pairs for both argument orders."""
        for n in range(2, 9):
            for i, (u, v) in enumerate(vertex_pairs(n)):
                assert pair_index(n, u, v) == i
                assert pair_index(n, v, u) == i


class TestLabeledGraph:
    """Tests for LabeledGraph construction and queries."""

    def test_from_edge_list(self):
        """Test edges are normalized, sorted and deduplicated."""
        g = LabeledGraph.from_edge_list(4, [(2, 1), (3, 2), (1, 2)])
        assert g.edges == ((1, 2), (2, 3))
        assert g.edge_count == 2
        assert g.degrees == (1, 2, 1, 0)
        assert g.degree_signature == (0, 1, 1, 2)

    def test_module_alias(self):
        """Test the module-level from_edge_list."""
        assert from_edge_list(3, [(1, 3)]) == LabeledGraph.from_edge_list(3, [(3, 1)])

    def test_endpoint_out_of_range(self):
        """Test endpoints outside 1..n are rejected."""
        with pytest.raises(ValueError, match="outside"):
            LabeledGraph.from_edge_list(3, [(1, 4)])

    def test_self_loop(self):
        """Test self-loops are rejected."""
        with pytest.raises(ValueError, match="Self-loop"):
            LabeledGraph.from_edge_list(3, [(2, 2)])

    def test_vertex_count_bounds(self):
        """Test n must be in 1..64."""
        with pytest.raises(ValueError):
            LabeledGraph.empty(0)
        with pytest.raises(ValueError):
            LabeledGraph.empty(65)

    def test_asymmetric_adjacency(self):
        """Test raw adjacency rows must be symmetric."""
        with pytest.raises(ValueError, match="symmetric"):
            LabeledGraph(2, (0b10, 0b00))

    def test_complete_and_empty(self):
        """Test the complete and empty constructors."""
        assert LabeledGraph.complete(5).edge_count == 10
        assert LabeledGraph.empty(5).edge_count == 0
        assert LabeledGraph.complete(1).edges == ()

    def test_pair_mask_roundtrip(self):
        """Test from_pair_mask inverts pair_mask."""
        g = LabeledGraph.from_edge_list(5, [(1, 2), (2, 5), (3, 4)])
        assert LabeledGraph.from_pair_mask(5, g.pair_mask) == g

    def test_has_edge_and_neighbors(self):
        """Test adjacency queries."""
        g = LabeledGraph.from_edge_list(4, [(1, 2), (1, 4)])
        assert g.has_edge(2, 1)
        assert not g.has_edge(2, 4)
        assert g.neighbors(1) == (2, 4)
        assert g.neighbors(3) == ()

    def test_relabel(self):
        """Test relabeling maps edge uv to p(u)p(v)."""
        g = LabeledGraph.from_edge_list(3, [(1, 2)])
        assert g.relabel((3, 1, 2)).edges == ((1, 3),)

    def test_relabel_rejects_non_permutation(self):
        """Test relabel validates its argument."""
        g = LabeledGraph.from_edge_list(3, [(1, 2)])
        with pytest.raises(ValueError, match="permutation"):
            g.relabel((1, 1, 2))

    def test_add_vertex(self):
        """Test adding a vertex with a given neighborhood."""
        g = LabeledGraph.from_edge_list(3, [(1, 2)]).add_vertex(0b101)
        assert g.n == 4
        assert g.edges == ((1, 2), (1, 4), (3, 4))


class TestVertexColoring:
    """Tests for VertexColoring."""

    def test_uniform(self):
        """Test the single-color coloring."""
        c = VertexColoring.uniform(4)
        assert c.n == 4
        assert c.color_count == 1

    def test_colors_must_be_contiguous(self):
        """Test colors have to be exactly 0..h-1."""
        with pytest.raises(ValueError):
            VertexColoring((0, 2, 0))
        with pytest.raises(ValueError):
            VertexColoring(())

    def test_permuted(self):
        """Test colors follow a relabeling."""
        c = VertexColoring((0, 1, 1))
        assert c.permuted((2, 3, 1)).colors == (1, 0, 1)
        assert c.color_of(2) == 1


class TestEdgePartition:
    """Tests for the edge-count partition."""

    def test_add_discard(self):
        """Test classes appear and disappear with their members."""
        part: EdgePartition[str] = EdgePartition()
        part.add("a", 2)
        part.add("b", 2)
        part.add("c", 5)
        assert part.sizes() == {2: 2, 5: 1}
        assert part.edge_counts == frozenset({2, 5})
        assert part.contains("a", 2)
        assert not part.contains("a", 5)

        assert part.discard("c", 5)
        assert not part.discard("c", 5)
        assert part.edge_counts == frozenset({2})
        assert len(part) == 2

    def test_empty_is_falsy(self):
        """Test an empty partition is falsy."""
        part: EdgePartition[str] = EdgePartition()
        assert not part
        part.add("x", 0)
        assert part

    def test_partition_by_edges(self):
        """Test grouping graphs by their edge counts."""
        graphs = enumerate_graphs(4)
        part = partition_by_edges((g, g.edge_count) for g in graphs)
        assert part.sizes() == {0: 1, 1: 1, 2: 2, 3: 3, 4: 2, 5: 1, 6: 1}
        assert sorted(g.edge_count for g in part) == sorted(g.edge_count for g in graphs)


class TestEnumerateGraphs:
    """Tests for exhaustive graph generation."""

    @pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156)])
    def test_counts(self, n, count):
        """Test the number of non-isomorphic graphs on n vertices."""
        assert len(enumerate_graphs(n)) == count

    @pytest.mark.slow
    def test_seven_vertices(self):
        """Test the count for n = 7."""
        assert len(enumerate_graphs(7)) == 1044

    def test_sorted_by_edge_count(self):
        """Test the output is ordered by edge count."""
        counts = [g.edge_count for g in enumerate_graphs(5)]
        assert counts == sorted(counts)

    def test_out_of_range(self):
        """Test unsupported sizes are rejected."""
        with pytest.raises(ValueError):
            enumerate_graphs(0)
        with pytest.raises(ValueError):
            enumerate_graphs(11)
