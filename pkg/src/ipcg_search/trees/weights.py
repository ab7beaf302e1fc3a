"""
Edge-weighted binary trees: paths, leaf distances and binarization.

Path edge sets between leaf pairs depend only on the tree, so they are
computed once per tree (``PathCache``) as a 0/1 incidence matrix of shape
(pairs, edges). Leaf distances for any weight vector are then one integer
matrix-vector product.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import networkx as nx
import numpy as np

from ipcg_search.core.graph import pair_index, vertex_pairs
from ipcg_search.trees.enumeration import UnrootedBinaryTree, assign_edge_indices

logger = logging.getLogger(__name__)


# =============================================================================
# Weights and distances
# =============================================================================

@dataclass(frozen=True)
class WeightAssignment:
    """
    Integer edge weights indexed by edge index.

    Attributes:
        weights: ``weights[i - 1]`` is the weight of edge index i

    Example:
        >>> w = WeightAssignment.of([1, 2, 3])
        >>> w[2]
        2
    """

    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        for i, value in enumerate(self.weights, start=1):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"Weight of edge {i} must be an integer, got {value!r}")
            if value < 0:
                raise ValueError(f"Weight of edge {i} cannot be negative: {value}")

    @classmethod
    def of(cls, values: Sequence[int] | np.ndarray) -> WeightAssignment:
        """Build from any integer sequence (numpy scalars are converted)."""
        return cls(tuple(int(v) for v in values))

    def __getitem__(self, index: int) -> int:
        """Weight of edge index ``index`` (1-based)."""
        if not 1 <= index <= len(self.weights):
            raise IndexError(f"Edge index {index} outside 1..{len(self.weights)}")
        return self.weights[index - 1]

    def __len__(self) -> int:
        return len(self.weights)

    def leaf_weights(self, n: int) -> tuple[int, ...]:
        """Weights of the pendant edges 1..n."""
        return self.weights[:n]

    def internal_weights(self, n: int) -> tuple[int, ...]:
        """Weights of the internal edges n+1..2n-3."""
        return self.weights[n:]

    def scaled(self, factor: int) -> WeightAssignment:
        """Every weight multiplied by ``factor``."""
        return WeightAssignment(tuple(w * factor for w in self.weights))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class DistanceTable:
    """
    Leaf-pair distances of a weighted tree.

    Attributes:
        n: Number of leaves
        values: int64 array over leaf pairs in ``vertex_pairs(n)`` order
    """

    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        expected = self.n * (self.n - 1) // 2
        if self.values.shape != (expected,):
            raise ValueError(
                f"Distance table for n={self.n} needs {expected} entries, got {self.values.shape}"
            )

    def __getitem__(self, pair: tuple[int, int]) -> int:
        u, v = pair
        if u == v:
            return 0
        return int(self.values[pair_index(self.n, u, v)])

    def as_dict(self) -> dict[tuple[int, int], int]:
        """Distances keyed by (u, v), u < v."""
        return {pair: int(d) for pair, d in zip(vertex_pairs(self.n), self.values)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistanceTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)


# =============================================================================
# Paths
# =============================================================================

def get_path_edges(t: UnrootedBinaryTree, s: int, u: int) -> frozenset[tuple[int, int]]:
    """
    All edges on the path between s and u.

    Breadth-first search from s records predecessors; the path is read back
    from u.

    Args:
        t: Tree
        s: Start vertex
        u: End vertex

    Returns:
        Edges (a, b), a < b, of the unique s-u path; empty when s = u

    Raises:
        ValueError: If s or u is not a vertex of t
    """
    for v in (s, u):
        if not 1 <= v <= t.vertex_count:
            raise ValueError(f"Vertex {v} is not in the tree (1..{t.vertex_count})")
    if s == u:
        return frozenset()

    predecessor = {s: s}
    queue = deque([s])
    while queue and u not in predecessor:
        x = queue.popleft()
        for y in t.neighbors(x):
            if y not in predecessor:
                predecessor[y] = x
                queue.append(y)

    edges = set()
    v = u
    while v != s:
        p = predecessor[v]
        edges.add((min(p, v), max(p, v)))
        v = p
    return frozenset(edges)


class PathCache:
    """
    Per-tree record of the edge indices on every leaf-leaf path.

    Attributes:
        tree: The indexed tree
        paths: ``paths[i]`` is the sorted edge-index tuple of leaf pair i
        incidence: (pairs x edges) int64 0/1 matrix
    """

    def __init__(self, tree: UnrootedBinaryTree):
        if not tree.is_indexed:
            raise ValueError("PathCache needs an indexed tree")
        self.tree = tree
        self.paths = tuple(
            tuple(sorted(tree.index_of(a, b) for a, b in get_path_edges(tree, u, v)))
            for u, v in vertex_pairs(tree.n)
        )
        self.incidence = np.zeros((len(self.paths), tree.edge_count), dtype=np.int64)
        for row, indices in enumerate(self.paths):
            self.incidence[row, [i - 1 for i in indices]] = 1
        logger.debug(f"Cached {len(self.paths)} leaf paths for {tree!r}")

    def distances(self, weights: WeightAssignment | np.ndarray) -> np.ndarray:
        """Leaf-pair distances (pair order) for one weight vector."""
        w = weights.as_array() if isinstance(weights, WeightAssignment) else weights
        if w.shape[-1] != self.tree.edge_count:
            raise ValueError(
                f"Weight vector has {w.shape[-1]} entries, tree has {self.tree.edge_count} edges"
            )
        return self.incidence @ w


@lru_cache(maxsize=256)
def path_cache(tree: UnrootedBinaryTree) -> PathCache:
    """Shared PathCache for a tree (built on first use)."""
    return PathCache(tree)


def leaf_distances(t: UnrootedBinaryTree, w: WeightAssignment) -> DistanceTable:
    """
    Distances between all leaf pairs of a weighted tree.

    Args:
        t: Indexed binary tree
        w: Weights for edge indices 1..2n-3

    Returns:
        DistanceTable over all C(n, 2) leaf pairs

    Raises:
        ValueError: If the weight count does not match the tree's edges
    """
    if len(w) != t.edge_count:
        raise ValueError(f"{len(w)} weights given for a tree with {t.edge_count} edges")
    if not t.is_indexed:
        t = assign_edge_indices(t)
    return DistanceTable(t.n, path_cache(t).distances(w))


# =============================================================================
# Binarization
# =============================================================================

def binarize(
    t: nx.Graph,
    weight: str = "weight",
) -> tuple[UnrootedBinaryTree, WeightAssignment]:
    """
    Convert an arbitrary weighted tree into a binary tree with the same leaf distances.

    Internal vertices of degree two are suppressed (the two incident weights
    are summed). A vertex of degree d > 3 repeatedly hands two of its
    neighbors to a new vertex joined to it by a zero-weight edge.

    Args:
        t: Tree whose leaves (degree-1 vertices) are exactly the integers 1..n,
            n >= 2; every edge carries an integer ``weight`` attribute
        weight: Name of the edge weight attribute

    Returns:
        Tuple of (indexed binary tree, weights by edge index)

    Raises:
        ValueError: If t is not a tree, has fewer than two leaves, has leaves
            not labeled 1..n, or has a non-integer or negative weight
    """
    if t.number_of_nodes() < 2 or not nx.is_tree(t):
        raise ValueError("binarize needs a tree with at least two vertices")

    leaves = sorted((v for v in t.nodes if t.degree(v) == 1), key=repr)
    n = len(leaves)
    if n < 2:
        raise ValueError(f"binarize needs at least two leaves, got {n}")
    if set(leaves) != set(range(1, n + 1)):
        raise ValueError(f"Leaves must be labeled 1..{n}, got {leaves}")

    work = nx.Graph()
    relabel = {v: v for v in range(1, n + 1)}
    next_id = n + 1
    for v in t.nodes:
        if v not in relabel:
            relabel[v] = next_id
            next_id += 1
    for a, b, data in t.edges(data=True):
        value = data.get(weight)
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 0:
            raise ValueError(f"Edge ({a}, {b}) needs a non-negative integer weight, got {value!r}")
        work.add_edge(relabel[a], relabel[b], weight=int(value))

    if n == 2:
        total = nx.shortest_path_length(work, 1, 2, weight="weight")
        tree = assign_edge_indices(UnrootedBinaryTree.from_edges(2, [(1, 2)]))
        return tree, WeightAssignment((int(total),))

    # degree-2 suppression: w(ab) = w(av) + w(vb)
    for v in [v for v in sorted(work.nodes) if v > n and work.degree(v) == 2]:
        a, b = sorted(work.neighbors(v))
        total = work[a][v]["weight"] + work[v][b]["weight"]
        work.remove_node(v)
        work.add_edge(a, b, weight=total)

    # degree > 3 splitting with zero-weight edges
    for v in sorted(work.nodes):
        while work.degree(v) > 3:
            u1, u2 = sorted(work.neighbors(v))[-2:]
            x = next_id
            next_id += 1
            for u in (u1, u2):
                work.add_edge(x, u, weight=work[v][u]["weight"])
                work.remove_edge(v, u)
            work.add_edge(v, x, weight=0)

    internal = sorted(v for v in work.nodes if v > n)
    mapping = {v: v for v in range(1, n + 1)}
    mapping.update({v: i for i, v in enumerate(internal, start=n + 1)})
    tree = assign_edge_indices(
        UnrootedBinaryTree.from_edges(n, ((mapping[a], mapping[b]) for a, b in work.edges))
    )
    weights = [0] * tree.edge_count
    for a, b, data in work.edges(data=True):
        weights[tree.index_of(mapping[a], mapping[b]) - 1] = data["weight"]

    logger.debug(f"Binarized tree with {t.number_of_nodes()} vertices into {tree!r}")
    return tree, WeightAssignment(tuple(weights))


def to_networkx(t: UnrootedBinaryTree, w: WeightAssignment | None = None) -> nx.Graph:
    """The tree as a networkx graph; edges carry ``weight`` and ``index`` when known."""
    g = nx.Graph()
    g.add_nodes_from(range(1, t.vertex_count + 1))
    for u, v in t.edges:
        attrs: dict[str, int] = {}
        if t.is_indexed:
            attrs["index"] = t.index_of(u, v)
            if w is not None:
                attrs["weight"] = w[attrs["index"]]
        g.add_edge(u, v, **attrs)
    return g
