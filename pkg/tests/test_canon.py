"""Tests for canonical forms and hash values."""

from itertools import permutations

import networkx as nx
import numpy as np
import pytest

from ipcg_search.core.canon import (
    CanonicalForm,
    canon_record,
    canonical_form,
    canonical_rows,
    gen_can,
    hash_of,
    is_isomorphic,
)
from ipcg_search.core.graph import LabeledGraph, VertexColoring, enumerate_graphs, vertex_pairs


def all_labeled_graphs(n: int) -> list[LabeledGraph]:
    return [LabeledGraph.from_pair_mask(n, mask) for mask in range(1 << len(vertex_pairs(n)))]


def brute_force_key(g: LabeledGraph) -> int:
    """Least pair mask over all relabelings."""
    return min(g.relabel(p).pair_mask for p in permutations(range(1, g.n + 1)))


def to_nx(g: LabeledGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(g.edges)
    return h


def random_permutation(n: int, rng: np.random.Generator) -> tuple[int, ...]:
    return tuple(int(v) + 1 for v in rng.permutation(n))


@pytest.fixture
def petersen() -> LabeledGraph:
    g = nx.petersen_graph()
    return LabeledGraph.from_edge_list(10, ((u + 1, v + 1) for u, v in g.edges))


class TestCanonicalForm:
    """Tests for canonical_form."""

    def test_permutation_maps_to_form(self):
        """Test g.relabel(permutation) is the canonical graph."""
        for g in enumerate_graphs(5):
            form, perm = canonical_form(g)
            assert g.relabel(perm) == form.graph

    def test_invariant_under_relabeling(self):
        """Test relabeled copies share one canonical form."""
        rng = np.random.default_rng(7)
        for g in enumerate_graphs(6):
            form, _ = canonical_form(g)
            for _ in range(3):
                h = g.relabel(random_permutation(6, rng))
                assert canonical_form(h)[0] == form

    def test_five_vertex_class_count(self):
        """Test the 1024 labeled graphs on five vertices fall into 34 classes."""
        forms = {canonical_form(g)[0] for g in all_labeled_graphs(5)}
        assert len(forms) == 34

    def test_agrees_with_brute_force(self):
        """Test canonical equality matches exhaustive relabeling on four vertices."""
        graphs = all_labeled_graphs(4)
        by_form = {}
        by_brute = {}
        for i, g in enumerate(graphs):
            by_form.setdefault(canonical_form(g)[0], set()).add(i)
            by_brute.setdefault(brute_force_key(g), set()).add(i)
        assert sorted(map(sorted, by_form.values())) == sorted(map(sorted, by_brute.values()))

    def test_regular_graphs_distinguished(self):
        """Test C6 and two triangles (both 2-regular) differ."""
        c6 = LabeledGraph.from_edge_list(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)])
        two_k3 = LabeledGraph.from_edge_list(6, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)])
        assert canonical_form(c6)[0] != canonical_form(two_k3)[0]

    def test_vertex_transitive_graph(self, petersen):
        """Test the Petersen graph canonicalizes consistently."""
        rng = np.random.default_rng(11)
        form, _ = canonical_form(petersen)
        for _ in range(5):
            h = petersen.relabel(random_permutation(10, rng))
            assert canonical_form(h)[0] == form

    def test_coloring_respected(self):
        """Test colors restrict the allowed isomorphisms."""
        path = LabeledGraph.from_edge_list(3, [(1, 2), (2, 3)])
        first_end = canonical_form(path, VertexColoring((1, 0, 0)))[0]
        last_end = canonical_form(path, VertexColoring((0, 0, 1)))[0]
        middle = canonical_form(path, VertexColoring((0, 1, 0)))[0]
        assert first_end == last_end
        assert middle != last_end

    def test_colored_permutation_keeps_colors(self):
        """Test vertices of different colors are never exchanged."""
        path = LabeledGraph.from_edge_list(4, [(1, 2), (2, 3), (3, 4)])
        coloring = VertexColoring((0, 1, 1, 0))
        form, perm = canonical_form(path, coloring)
        assert coloring.permuted(perm) == form.coloring

    def test_coloring_size_mismatch(self):
        """Test a coloring of the wrong length is rejected."""
        with pytest.raises(ValueError):
            canonical_form(LabeledGraph.empty(3), VertexColoring((0, 0)))

    def test_canonical_rows_fast_path(self):
        """Test canonical_rows matches canonical_form on uncolored graphs."""
        for g in enumerate_graphs(5):
            assert canonical_rows(g.adjacency) == canonical_form(g)[0].graph.adjacency


class TestSerialization:
    """Tests for CanonicalForm text form."""

    def test_uniform_is_plain_graph6(self):
        """Test single-color forms serialize as graph6 only."""
        form, _ = canonical_form(LabeledGraph.complete(3))
        assert form.serialize() == "Bw"
        assert str(form) == "Bw"

    def test_colored_suffix(self):
        """Test colored forms carry their color sequence."""
        path = LabeledGraph.from_edge_list(3, [(1, 2), (2, 3)])
        form, _ = canonical_form(path, VertexColoring((1, 0, 1)))
        text = form.serialize()
        assert ":" in text
        assert CanonicalForm.deserialize(text) == form

    def test_deserialize_uniform(self):
        """Test deserialize restores uncolored forms."""
        for g in enumerate_graphs(4):
            form, _ = canonical_form(g)
            assert CanonicalForm.deserialize(form.serialize()) == form

    def test_color_length_mismatch(self):
        """Test a color list of the wrong length is rejected."""
        with pytest.raises(ValueError):
            CanonicalForm.deserialize("Bw:0,1")


class TestHashing:
    """Tests for hash values and records."""

    def test_isomorphic_graphs_share_hash(self):
        """Test hash values depend only on the class."""
        g = LabeledGraph.from_edge_list(5, [(1, 2), (2, 3), (4, 5)])
        h = g.relabel((5, 3, 1, 2, 4))
        assert hash_of(canonical_form(g)[0]) == hash_of(canonical_form(h)[0])

    def test_hash_values_distinguish_classes(self):
        """Test the 156 six-vertex classes get 156 hash values."""
        hashes = {hash_of(canonical_form(g)[0]) for g in enumerate_graphs(6)}
        assert len(hashes) == 156

    def test_hash_text(self):
        """Test the hex rendering of a hash value."""
        text = str(hash_of(canonical_form(LabeledGraph.empty(3))[0]))
        words = text.split("-")
        assert len(words) == 3
        assert all(len(w) == 8 for w in words)

    def test_gen_can_preserves_order(self):
        """Test gen_can returns one record per input in order."""
        graphs = enumerate_graphs(4)
        path = LabeledGraph.from_edge_list(3, [(1, 2), (2, 3)])
        records = gen_can(graphs + [(path, VertexColoring((1, 0, 1))), (path, None)])
        assert len(records) == len(graphs) + 2
        assert records[0] == canon_record(graphs[0])
        assert records[-1].form == canonical_form(path)[0]
        assert records[-2].form.coloring.color_count == 2


class TestIsIsomorphic:
    """Tests for is_isomorphic."""

    def test_same_degrees_different_graphs(self):
        """Test graphs with equal degree sequences can differ."""
        c6 = LabeledGraph.from_edge_list(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)])
        two_k3 = LabeledGraph.from_edge_list(6, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)])
        assert not is_isomorphic(c6, two_k3)

    def test_relabeled_copy(self):
        """Test a relabeled copy is isomorphic."""
        c4 = LabeledGraph.from_edge_list(4, [(1, 2), (2, 3), (3, 4), (4, 1)])
        assert is_isomorphic(c4, c4.relabel((2, 4, 1, 3)))

    def test_size_mismatch(self):
        """Test different n or edge counts are never isomorphic."""
        assert not is_isomorphic(LabeledGraph.empty(3), LabeledGraph.empty(4))
        assert not is_isomorphic(
            LabeledGraph.from_edge_list(4, [(1, 2), (2, 3), (3, 4)]),
            LabeledGraph.from_edge_list(4, [(1, 2), (1, 3), (1, 4)]),
        )

    def test_random_pairs_match_networkx(self):
        """Test 200 random pairs on at most six vertices against networkx."""
        rng = np.random.default_rng(2024)
        for _ in range(200):
            n = int(rng.integers(3, 7))
            pairs = vertex_pairs(n)
            m = int(rng.integers(0, len(pairs) + 1))
            g1 = LabeledGraph.from_edge_list(
                n, (pairs[i] for i in rng.choice(len(pairs), size=m, replace=False))
            )
            if rng.random() < 0.5:
                g2 = g1.relabel(random_permutation(n, rng))
            else:
                g2 = LabeledGraph.from_edge_list(
                    n, (pairs[i] for i in rng.choice(len(pairs), size=m, replace=False))
                )
            assert is_isomorphic(g1, g2) == nx.is_isomorphic(to_nx(g1), to_nx(g2))

    def test_all_five_vertex_pairs_match_networkx(self):
        """Test every pair of labeled 5-vertex graphs against networkx classes."""
        labeled = all_labeled_graphs(5)
        representatives: list[LabeledGraph] = []
        oracle_class = []
        for g in labeled:
            for i, rep in enumerate(representatives):
                if nx.is_isomorphic(to_nx(g), to_nx(rep)):
                    oracle_class.append(i)
                    break
            else:
                oracle_class.append(len(representatives))
                representatives.append(g)
        assert len(representatives) == 34

        # Pairwise agreement follows from agreement with each class representative
        for g, cls in zip(labeled, oracle_class):
            for i, rep in enumerate(representatives):
                assert is_isomorphic(g, rep) == (i == cls)
