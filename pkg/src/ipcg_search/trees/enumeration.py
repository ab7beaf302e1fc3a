"""
Enumeration of full binary trees and unrooted binary trees.

Full binary trees (every internal vertex has two children) are generated
bottom-up: a tree with n leaves is a root joined to two smaller trees with
n1 + n2 = n leaves. Unrooted binary trees (internal vertices of degree three)
are assembled around a centroid: either a vertex joined to three full binary
trees of at most n/2 leaves each, or an edge joining two trees of exactly n/2
leaves. Leftover duplicates are removed by canonical form.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Iterator

from ipcg_search.core.canon import canonical_form
from ipcg_search.core.graph import LabeledGraph, VertexColoring

logger = logging.getLogger(__name__)

LEAF_COLOR = 0
INTERNAL_COLOR = 1


# =============================================================================
# Rooted full binary trees
# =============================================================================

@dataclass(frozen=True)
class RootedTree:
    """
    Rooted full binary tree with unlabeled leaves.

    Attributes:
        children: Either empty (the tree is a single leaf) or exactly two subtrees
        leaf_count: Number of leaves (derived)
    """

    children: tuple[RootedTree, ...] = ()
    leaf_count: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.children) not in (0, 2):
            raise ValueError(
                f"A full binary tree vertex has 0 or 2 children, got {len(self.children)}"
            )
        count = sum(c.leaf_count for c in self.children) if self.children else 1
        object.__setattr__(self, "leaf_count", count)

    @classmethod
    def leaf(cls) -> RootedTree:
        """The single-vertex tree (the root is its only leaf)."""
        return cls()

    @classmethod
    def join(cls, left: RootedTree, right: RootedTree) -> RootedTree:
        """New root with the two given subtrees."""
        return cls((left, right))

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def vertex_count(self) -> int:
        """Number of vertices (2 * leaf_count - 1)."""
        return 2 * self.leaf_count - 1

    def newick(self) -> str:
        """Shape in Newick notation with anonymous leaves, e.g. ``((,),);``."""
        return self._shape() + ";"

    def _shape(self) -> str:
        if self.is_leaf:
            return ""
        left, right = self.children
        return f"({left._shape()},{right._shape()})"

    def __repr__(self) -> str:
        return f"RootedTree(leaves={self.leaf_count}, shape={self.newick()})"


@lru_cache(maxsize=None)
def _full_binary_family(n: int) -> tuple[RootedTree, ...]:
    if n == 1:
        return (RootedTree.leaf(),)
    family = []
    for n1 in range(n - 1, (n - 1) // 2, -1):
        n2 = n - n1
        if n2 > n1:
            break
        first, second = _full_binary_family(n1), _full_binary_family(n2)
        for i, t1 in enumerate(first):
            for j, t2 in enumerate(second):
                if n1 == n2 and j > i:
                    break
                family.append(RootedTree.join(t1, t2))
    return tuple(family)


def gen_full_binary_trees(n: int) -> list[RootedTree]:
    """
    All mutually non-isomorphic full binary trees with n leaves.

    The list order is stable across runs; list position identifies T_i in the
    i >= j tie-break rules used while composing larger trees.

    Args:
        n: Number of leaves (>= 1)

    Returns:
        Trees in construction order

    Raises:
        ValueError: If n < 1

    Example:
        >>> [len(gen_full_binary_trees(n)) for n in range(1, 8)]
        [1, 1, 1, 2, 3, 6, 11]
    """
    if n < 1:
        raise ValueError(f"A full binary tree needs at least one leaf, got n={n}")
    return list(_full_binary_family(n))


# =============================================================================
# Unrooted binary trees
# =============================================================================

@dataclass(frozen=True)
class UnrootedBinaryTree:
    """
    Unrooted tree whose internal vertices all have degree three.

    Vertices are 1..2n-2; vertices 1..n are the leaves. When ``edge_order``
    is set, ``edge_order[i - 1]`` is the edge carrying index i: leaf i's
    pendant edge has index i and internal edges have indices n+1..2n-3.

    Attributes:
        n: Number of leaves (>= 2)
        edges: Edges (u, v) with u < v, sorted
        edge_order: Edges listed by index, or None before indexing
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    edge_order: tuple[tuple[int, int], ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        n = self.n
        if n < 2:
            raise ValueError(f"A binary tree needs at least two leaves, got n={n}")
        if len(self.edges) != 2 * n - 3:
            raise ValueError(f"Expected {2 * n - 3} edges for n={n}, got {len(self.edges)}")

        vertex_count = 2 * n - 2
        degree = [0] * (vertex_count + 1)
        for u, v in self.edges:
            if not (1 <= u < v <= vertex_count):
                raise ValueError(f"Edge ({u}, {v}) is not normalized within 1..{vertex_count}")
            degree[u] += 1
            degree[v] += 1
        for v in range(1, vertex_count + 1):
            expected = 1 if v <= n else 3
            if degree[v] != expected:
                kind = "leaf" if v <= n else "internal vertex"
                raise ValueError(f"{kind} {v} has degree {degree[v]}, expected {expected}")
        if len(self._reachable(1)) != vertex_count:
            raise ValueError("Tree is not connected")

        if self.edge_order is not None:
            if sorted(self.edge_order) != list(self.edges):
                raise ValueError("edge_order is not a permutation of the edges")
            if n >= 3:
                for i in range(1, n + 1):
                    if i not in self.edge_order[i - 1]:
                        raise ValueError(f"Edge index {i} is not the pendant edge of leaf {i}")

    # -------------------------------------------------------------------------
    # Construction
    # -------------------------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> UnrootedBinaryTree:
        """Build from vertex pairs; pairs are normalized and sorted."""
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in pairs))
        return cls(n, edges)

    # -------------------------------------------------------------------------
    # Queries
    # -------------------------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return 2 * self.n - 2

    @property
    def edge_count(self) -> int:
        return 2 * self.n - 3

    @property
    def leaves(self) -> range:
        return range(1, self.n + 1)

    @property
    def internal_vertices(self) -> range:
        return range(self.n + 1, self.vertex_count + 1)

    @property
    def is_indexed(self) -> bool:
        return self.edge_order is not None

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors of v in increasing order."""
        return self._adjacency()[v]

    def index_of(self, u: int, v: int) -> int:
        """Edge index of uv."""
        if self.edge_order is None:
            raise ValueError("Tree has no edge indices; call assign_edge_indices first")
        return self._index_map()[(min(u, v), max(u, v))]

    def edge_at(self, index: int) -> tuple[int, int]:
        """Edge carrying the given index (1-based)."""
        if self.edge_order is None:
            raise ValueError("Tree has no edge indices; call assign_edge_indices first")
        return self.edge_order[index - 1]

    def to_graph(self) -> LabeledGraph:
        """The tree as a LabeledGraph on 2n-2 vertices."""
        return LabeledGraph.from_edge_list(self.vertex_count, self.edges)

    def coloring(self) -> VertexColoring:
        """Leaf/internal 2-coloring (a single color when n = 2)."""
        colors = [LEAF_COLOR] * self.n + [INTERNAL_COLOR] * (self.vertex_count - self.n)
        return VertexColoring(tuple(colors))

    # -------------------------------------------------------------------------
    # Internals
    # -------------------------------------------------------------------------

    def _adjacency(self) -> dict[int, tuple[int, ...]]:
        cached = self.__dict__.get("_adjacency_cache")
        if cached is None:
            lists: dict[int, list[int]] = {v: [] for v in range(1, self.vertex_count + 1)}
            for u, v in self.edges:
                lists[u].append(v)
                lists[v].append(u)
            cached = {v: tuple(sorted(nbrs)) for v, nbrs in lists.items()}
            object.__setattr__(self, "_adjacency_cache", cached)
        return cached

    def _index_map(self) -> dict[tuple[int, int], int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            assert self.edge_order is not None
            cached = {e: i for i, e in enumerate(self.edge_order, start=1)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    def _reachable(self, start: int) -> set[int]:
        lists: dict[int, list[int]] = {}
        for u, v in self.edges:
            lists.setdefault(u, []).append(v)
            lists.setdefault(v, []).append(u)
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in lists.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def __repr__(self) -> str:
        return f"UnrootedBinaryTree(n={self.n}, edges={list(self.edges)})"


def assign_edge_indices(t: UnrootedBinaryTree) -> UnrootedBinaryTree:
    """
    Assign the edge indices 1..2n-3.

    Leaf i's pendant edge gets index i. Internal edges get n+1.. in the order
    a breadth-first search from vertex n+1 (neighbors ascending) first
    crosses them. For n = 2 the single edge gets index 1.

    Args:
        t: Binary tree (an existing indexing is replaced)

    Returns:
        Copy of t with ``edge_order`` set
    """
    if t.n == 2:
        return replace(t, edge_order=t.edges)

    order: list[tuple[int, int]] = []
    for leaf in t.leaves:
        (parent,) = t.neighbors(leaf)
        order.append((min(leaf, parent), max(leaf, parent)))

    root = t.n + 1
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in t.neighbors(x):
            if y <= t.n or y in seen:
                continue
            seen.add(y)
            queue.append(y)
            order.append((min(x, y), max(x, y)))

    return replace(t, edge_order=tuple(order))


# -----------------------------------------------------------------------------
# Assembly from full binary trees
# -----------------------------------------------------------------------------

class _Builder:
    """Lays out rooted subtrees with temporary ids, then relabels leaves 1..n."""

    def __init__(self) -> None:
        self.next_id = 0
        self.edges: list[tuple[int, int]] = []
        self.leaves: list[int] = []

    def vertex(self) -> int:
        self.next_id += 1
        return self.next_id

    def attach(self, tree: RootedTree) -> int:
        top = self.vertex()
        if tree.is_leaf:
            self.leaves.append(top)
            return top
        for child in tree.children:
            self.edges.append((top, self.attach(child)))
        return top

    def finish(self) -> UnrootedBinaryTree:
        n = len(self.leaves)
        mapping = {old: new for new, old in enumerate(self.leaves, start=1)}
        internal = [v for v in range(1, self.next_id + 1) if v not in mapping]
        mapping.update({old: new for new, old in enumerate(internal, start=n + 1)})
        tree = UnrootedBinaryTree.from_edges(n, ((mapping[u], mapping[v]) for u, v in self.edges))
        return assign_edge_indices(tree)


def _unicentroid(trees: Iterable[RootedTree]) -> UnrootedBinaryTree:
    builder = _Builder()
    center = builder.vertex()
    for tree in trees:
        builder.edges.append((center, builder.attach(tree)))
    return builder.finish()


def _bicentroid(first: RootedTree, second: RootedTree) -> UnrootedBinaryTree:
    builder = _Builder()
    a = builder.attach(first)
    b = builder.attach(second)
    builder.edges.append((a, b))
    return builder.finish()


def _candidates(n: int) -> Iterator[UnrootedBinaryTree]:
    half = n // 2
    for n1 in range(half, 0, -1):
        for n2 in range(min(n1, n - n1 - 1), 0, -1):
            n3 = n - n1 - n2
            if n3 > n2:
                break
            if n3 < 1:
                continue
            f1, f2, f3 = (gen_full_binary_trees(m) for m in (n1, n2, n3))
            for i, t1 in enumerate(f1):
                for j, t2 in enumerate(f2):
                    if n1 == n2 and j > i:
                        break
                    for k, t3 in enumerate(f3):
                        if n2 == n3 and k > j:
                            break
                        yield _unicentroid((t1, t2, t3))

    if n % 2 == 0:
        family = gen_full_binary_trees(half)
        for i, t1 in enumerate(family):
            for t2 in family[:i + 1]:
                yield _bicentroid(t1, t2)


@lru_cache(maxsize=None)
def _binary_family(n: int) -> tuple[UnrootedBinaryTree, ...]:
    unique: dict[object, UnrootedBinaryTree] = {}
    generated = 0
    for tree in _candidates(n):
        generated += 1
        form, _ = canonical_form(tree.to_graph(), tree.coloring())
        unique.setdefault(form, tree)
    logger.debug(
        f"n={n}: {generated} composed trees, {generated - len(unique)} duplicates removed"
    )
    return tuple(unique.values())


def gen_binary_trees(n: int) -> list[UnrootedBinaryTree]:
    """
    All mutually non-isomorphic unrooted binary trees with n leaves.

    Every returned tree carries edge indices (see ``assign_edge_indices``).

    Args:
        n: Number of leaves (>= 2)

    Returns:
        Trees in a stable order; position i (1-based) is the tree index T_i
        used by campaign tree subsets and certificates

    Raises:
        ValueError: If n < 2

    Example:
        >>> [len(gen_binary_trees(n)) for n in (8, 9, 10)]
        [4, 6, 11]
    """
    if n < 2:
        raise ValueError(f"A binary tree needs at least two leaves, got n={n}")
    return list(_binary_family(n))
