"""
Labeled graphs, vertex colorings and edge-count partitions.

Graphs are simple and undirected on the vertex set {1, ..., n}. Internally
each vertex carries an adjacency bitset (bit ``v - 1`` of ``adjacency[u - 1]``
is set when uv is an edge), which bounds the package to n <= 64.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Generic, Hashable, Iterable, Iterator, Sequence, TypeVar

logger = logging.getLogger(__name__)

MAX_VERTICES = 64

T = TypeVar("T", bound=Hashable)


# =============================================================================
# Vertex pairs
# =============================================================================

@lru_cache(maxsize=None)
def vertex_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """
    All unordered vertex pairs (u, v), u < v, in lexicographic order.

    The position of a pair in this tuple is its *pair index*; distance tables
    and pair masks are laid out in this order.
    """
    return tuple(combinations(range(1, n + 1), 2))


def pair_index(n: int, u: int, v: int) -> int:
    """Position of the pair {u, v} in ``vertex_pairs(n)``."""
    if u > v:
        u, v = v, u
    # pairs starting with 1..u-1 come first
    return (u - 1) * n - (u - 1) * u // 2 + (v - u - 1)


# =============================================================================
# LabeledGraph
# =============================================================================

@dataclass(frozen=True)
class LabeledGraph:
    """
    Simple undirected graph on vertices 1..n.

    Attributes:
        n: Number of vertices (1 <= n <= 64)
        adjacency: Adjacency bitsets, one per vertex

    Example:
        >>> g = LabeledGraph.from_edge_list(3, [(1, 2), (2, 3)])
        >>> g.edges
        ((1, 2), (2, 3))
        >>> g.degrees
        (1, 2, 1)
    """

    n: int
    adjacency: tuple[int, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VERTICES:
            raise ValueError(f"Vertex count must be in 1..{MAX_VERTICES}, got {self.n}")
        if len(self.adjacency) != self.n:
            raise ValueError(
                f"adjacency has {len(self.adjacency)} rows for {self.n} vertices"
            )
        full = (1 << self.n) - 1
        for u, row in enumerate(self.adjacency):
            if row & ~full:
                raise ValueError(f"Vertex {u + 1} has a neighbor outside 1..{self.n}")
            if row >> u & 1:
                raise ValueError(f"Self-loop at vertex {u + 1}")
            for v in _bits(row):
                if not self.adjacency[v] >> u & 1:
                    raise ValueError(f"Adjacency is not symmetric at {u + 1}-{v + 1}")

    # -------------------------------------------------------------------------
    # Construction
    # -------------------------------------------------------------------------

    @classmethod
    def from_edge_list(cls, n: int, pairs: Iterable[tuple[int, int]]) -> LabeledGraph:
        """
        Build a graph from a list of vertex pairs.

        Duplicate pairs and reversed pairs are merged.

        Args:
            n: Number of vertices
            pairs: Vertex pairs with endpoints in 1..n

        Returns:
            LabeledGraph with normalized edge set

        Raises:
            ValueError: If an endpoint is out of range or a pair is a self-loop
        """
        if not 1 <= n <= MAX_VERTICES:
            raise ValueError(f"Vertex count must be in 1..{MAX_VERTICES}, got {n}")
        rows = [0] * n
        for u, v in pairs:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"Edge ({u}, {v}) has an endpoint outside 1..{n}")
            if u == v:
                raise ValueError(f"Self-loop at vertex {u}")
            rows[u - 1] |= 1 << (v - 1)
            rows[v - 1] |= 1 << (u - 1)
        return cls(n, tuple(rows))

    @classmethod
    def from_pair_mask(cls, n: int, mask: int) -> LabeledGraph:
        """Build a graph whose edges are the set bits of ``mask`` (pair-index order)."""
        rows = [0] * n
        pairs = vertex_pairs(n)
        for i in _bits(mask):
            u, v = pairs[i]
            rows[u - 1] |= 1 << (v - 1)
            rows[v - 1] |= 1 << (u - 1)
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> LabeledGraph:
        """Graph on n vertices with no edges."""
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> LabeledGraph:
        """Complete graph K_n."""
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << u) for u in range(n)))

    # -------------------------------------------------------------------------
    # Queries
    # -------------------------------------------------------------------------

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as (u, v) with u < v, sorted."""
        return tuple(
            (u + 1, v + 1)
            for u, row in enumerate(self.adjacency)
            for v in _bits(row >> (u + 1) << (u + 1))
        )

    @property
    def edge_count(self) -> int:
        """Number of edges."""
        return sum(row.bit_count() for row in self.adjacency) // 2

    @property
    def degrees(self) -> tuple[int, ...]:
        """Degree of each vertex 1..n."""
        return tuple(row.bit_count() for row in self.adjacency)

    @property
    def degree_signature(self) -> tuple[int, ...]:
        """Sorted degree sequence (an isomorphism invariant)."""
        return tuple(sorted(self.degrees))

    @property
    def pair_mask(self) -> int:
        """Edge set as a bitmask over pair indices."""
        mask = 0
        for u, v in self.edges:
            mask |= 1 << pair_index(self.n, u, v)
        return mask

    def has_edge(self, u: int, v: int) -> bool:
        """Check whether uv is an edge."""
        return bool(self.adjacency[u - 1] >> (v - 1) & 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors of vertex v in increasing order."""
        return tuple(u + 1 for u in _bits(self.adjacency[v - 1]))

    def relabel(self, permutation: Sequence[int]) -> LabeledGraph:
        """
        Apply a vertex relabeling.

        Args:
            permutation: ``permutation[v - 1]`` is the new label of vertex v

        Returns:
            Graph with edge {p(u), p(v)} for every edge {u, v}
        """
        if sorted(permutation) != list(range(1, self.n + 1)):
            raise ValueError(f"Not a permutation of 1..{self.n}: {tuple(permutation)}")
        rows = [0] * self.n
        for u, v in self.edges:
            pu, pv = permutation[u - 1] - 1, permutation[v - 1] - 1
            rows[pu] |= 1 << pv
            rows[pv] |= 1 << pu
        return LabeledGraph(self.n, tuple(rows))

    def add_vertex(self, neighbors_mask: int) -> LabeledGraph:
        """Return a graph with a new vertex n+1 adjacent to the vertices in ``neighbors_mask``."""
        rows = [row | ((neighbors_mask >> u & 1) << self.n) for u, row in enumerate(self.adjacency)]
        rows.append(neighbors_mask)
        return LabeledGraph(self.n + 1, tuple(rows))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, edges={list(self.edges)})"


def from_edge_list(n: int, pairs: Iterable[tuple[int, int]]) -> LabeledGraph:
    """Module-level alias of ``LabeledGraph.from_edge_list``."""
    return LabeledGraph.from_edge_list(n, pairs)


# =============================================================================
# VertexColoring
# =============================================================================

@dataclass(frozen=True)
class VertexColoring:
    """
    Assignment of color indices 0..h-1 to the vertices 1..n.

    Attributes:
        colors: ``colors[v - 1]`` is the color of vertex v

    Every color in 0..h-1 must be used (a full h-vertex coloring).
    """

    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.colors:
            raise ValueError("A coloring needs at least one vertex")
        used = set(self.colors)
        if used != set(range(len(used))):
            raise ValueError(f"Colors must be exactly 0..h-1, got {sorted(used)}")

    @classmethod
    def uniform(cls, n: int) -> VertexColoring:
        """Single-color coloring of n vertices."""
        return cls((0,) * n)

    @property
    def n(self) -> int:
        """Number of colored vertices."""
        return len(self.colors)

    @property
    def color_count(self) -> int:
        """Number of colors h."""
        return max(self.colors) + 1

    def color_of(self, v: int) -> int:
        """Color of vertex v."""
        return self.colors[v - 1]

    def permuted(self, permutation: Sequence[int]) -> VertexColoring:
        """Coloring carried along a relabeling (``permutation[v - 1]`` = new label of v)."""
        colors = [0] * self.n
        for v, color in enumerate(self.colors):
            colors[permutation[v] - 1] = color
        return VertexColoring(tuple(colors))


# =============================================================================
# Edge-count partition
# =============================================================================

@dataclass
class EdgePartition(Generic[T]):
    """
    Records grouped by edge count.

    Attributes:
        classes: Map edge count p -> set of records with exactly p edges.
            Empty classes are never stored.
    """

    classes: dict[int, set[T]] = field(default_factory=dict)

    def add(self, record: T, edge_count: int) -> None:
        """Insert a record into class ``edge_count``."""
        self.classes.setdefault(edge_count, set()).add(record)

    def discard(self, record: T, edge_count: int) -> bool:
        """Remove a record; returns True if it was present."""
        members = self.classes.get(edge_count)
        if not members or record not in members:
            return False
        members.remove(record)
        if not members:
            del self.classes[edge_count]
        return True

    def contains(self, record: T, edge_count: int) -> bool:
        """Membership test within one class."""
        return record in self.classes.get(edge_count, ())

    @property
    def edge_counts(self) -> frozenset[int]:
        """Edge counts with a nonempty class."""
        return frozenset(self.classes)

    def sizes(self) -> dict[int, int]:
        """Class sizes keyed by edge count, ascending."""
        return {p: len(self.classes[p]) for p in sorted(self.classes)}

    def __iter__(self) -> Iterator[T]:
        for p in sorted(self.classes):
            yield from self.classes[p]

    def __len__(self) -> int:
        return sum(len(members) for members in self.classes.values())

    def __bool__(self) -> bool:
        return bool(self.classes)


def partition_by_edges(records: Iterable[tuple[T, int]]) -> EdgePartition[T]:
    """
    Partition records with respect to their number of edges.

    Args:
        records: (record, edge count) pairs, all from graphs with the same n

    Returns:
        EdgePartition with ``classes[p]`` holding exactly the records with p edges
    """
    partition: EdgePartition[T] = EdgePartition()
    for record, edge_count in records:
        partition.add(record, edge_count)
    return partition


# =============================================================================
# Exhaustive graph generation
# =============================================================================

def enumerate_graphs(n: int) -> list[LabeledGraph]:
    """
    All mutually non-isomorphic graphs on n vertices.

    Grows graphs one vertex at a time: every graph on m vertices is extended
    by a new vertex with every possible neighborhood, and the results are
    deduplicated by canonical form.

    Args:
        n: Number of vertices (1 <= n <= 10)

    Returns:
        Canonical representatives sorted by (edge count, graph6)

    Raises:
        ValueError: If n is outside the supported range
    """
    from ipcg_search.core.canon import canonical_form
    from ipcg_search.core.graph6 import write_graph6

    if not 1 <= n <= 10:
        raise ValueError(f"Exhaustive generation supports 1 <= n <= 10, got {n}")

    level = [LabeledGraph.empty(1)]
    for m in range(1, n):
        seen: dict[LabeledGraph, None] = {}
        for g in level:
            for neighbors in range(1 << m):
                form, _ = canonical_form(g.add_vertex(neighbors))
                seen.setdefault(form.graph, None)
        level = list(seen)
        logger.debug(f"{len(level)} graphs on {m + 1} vertices")

    return sorted(level, key=lambda g: (g.edge_count, write_graph6(g)))


def _bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
