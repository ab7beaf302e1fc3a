"""
Canonical representation of vertex-colored graphs.

Uses equitable partition refinement followed by a backtracking search that
individualizes vertices of the first non-singleton cell. Among all discrete
partitions reached, the one whose relabeled adjacency rows are
lexicographically least is the canonical labeling. Automorphisms discovered
during the search (two leaves with identical rows) prune children lying in
the same orbit of the pointwise stabilizer of the current prefix.

Designed for the small graphs of this package (n up to a few dozen); it is
not a substitute for nauty on large inputs.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from ipcg_search.core.graph import LabeledGraph, VertexColoring, _bits
from ipcg_search.core.graph6 import parse_graph6, write_graph6

logger = logging.getLogger(__name__)


# =============================================================================
# Types
# =============================================================================

@dataclass(frozen=True)
class CanonicalForm:
    """
    Unique representative of the color-isomorphism class of a colored graph.

    Two colored graphs are color-isomorphic if and only if their canonical
    forms are equal.

    Attributes:
        graph: The graph relabeled to its canonical labeling
        coloring: Colors of the canonical vertices 1..n
    """

    graph: LabeledGraph
    coloring: VertexColoring

    @property
    def n(self) -> int:
        """Number of vertices."""
        return self.graph.n

    @property
    def edge_count(self) -> int:
        """Number of edges."""
        return self.graph.edge_count

    def serialize(self) -> str:
        """
        Text form: graph6 of the canonical graph, followed by ``:c1,c2,...``
        when more than one color is present.
        """
        g6 = write_graph6(self.graph)
        if self.coloring.color_count == 1:
            return g6
        return g6 + ":" + ",".join(str(c) for c in self.coloring.colors)

    @classmethod
    def deserialize(cls, text: str) -> CanonicalForm:
        """Inverse of ``serialize``; the text is trusted to be canonical."""
        g6, _, colors = text.strip().partition(":")
        graph = parse_graph6(g6)
        if colors:
            coloring = VertexColoring(tuple(int(c) for c in colors.split(",")))
            if coloring.n != graph.n:
                raise ValueError(f"Color sequence length {coloring.n} != n={graph.n}")
        else:
            coloring = VertexColoring.uniform(graph.n)
        return cls(graph, coloring)

    def __str__(self) -> str:
        return self.serialize()


@dataclass(frozen=True)
class HashValue:
    """
    96-bit digest of a canonical form, as three 32-bit words.

    Equal canonical forms have equal hash values; different hash values
    therefore certify non-isomorphism. Equal hashes prove nothing.
    """

    digest: tuple[int, int, int]

    def __str__(self) -> str:
        return "-".join(f"{word:08x}" for word in self.digest)


class CanonRecord(NamedTuple):
    """A canonical form paired with its hash value."""

    form: CanonicalForm
    hash: HashValue


# =============================================================================
# Refinement and search
# =============================================================================

def _refine(adjacency: Sequence[int], cells: list[int]) -> list[int]:
    """
    Refine an ordered partition (list of vertex bitmasks) to an equitable one.

    Each pass splits every cell by the vector of neighbor counts into all
    cells of the partition at the start of the pass. Subcells are ordered by
    that vector, so the result depends only on the structure of the graph and
    the order of the input cells.
    """
    while True:
        refined: list[int] = []
        split = False
        for cell in cells:
            if not cell & (cell - 1):
                refined.append(cell)
                continue
            groups: dict[tuple[int, ...], int] = {}
            for v in _bits(cell):
                row = adjacency[v]
                signature = tuple((row & other).bit_count() for other in cells)
                groups[signature] = groups.get(signature, 0) | (1 << v)
            if len(groups) == 1:
                refined.append(cell)
                continue
            split = True
            refined.extend(groups[sig] for sig in sorted(groups))
        if not split:
            return refined
        cells = refined


def _relabeled_rows(adjacency: Sequence[int], order: Sequence[int]) -> tuple[int, ...]:
    """Adjacency rows after mapping vertex ``order[i]`` to position i."""
    position = [0] * len(order)
    for i, v in enumerate(order):
        position[v] = i
    rows = []
    for v in order:
        row = 0
        for u in _bits(adjacency[v]):
            row |= 1 << position[u]
        rows.append(row)
    return tuple(rows)


class _Search:
    """Backtracking over individualizations with orbit pruning."""

    def __init__(self, adjacency: Sequence[int]):
        self.adjacency = adjacency
        self.first: tuple[tuple[int, ...], list[int]] | None = None
        self.best: tuple[tuple[int, ...], list[int]] | None = None
        self.automorphisms: list[tuple[int, ...]] = []

    def run(self, cells: list[int]) -> tuple[tuple[int, ...], list[int]]:
        self._visit(_refine(self.adjacency, cells), [])
        assert self.best is not None
        return self.best

    def _visit(self, cells: list[int], prefix: list[int]) -> None:
        target = next((i for i, cell in enumerate(cells) if cell & (cell - 1)), None)
        if target is None:
            self._leaf([cell.bit_length() - 1 for cell in cells])
            return

        cell = cells[target]
        tried: list[int] = []
        for v in _bits(cell):
            if tried and self._same_orbit(v, tried, prefix):
                continue
            tried.append(v)
            child = cells[:target] + [1 << v, cell & ~(1 << v)] + cells[target + 1:]
            self._visit(_refine(self.adjacency, child), prefix + [v])

    def _same_orbit(self, v: int, tried: list[int], prefix: list[int]) -> bool:
        generators = [
            g for g in self.automorphisms if all(g[p] == p for p in prefix)
        ]
        if not generators:
            return False
        orbit = {v}
        frontier = [v]
        while frontier:
            x = frontier.pop()
            for g in generators:
                y = g[x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        return any(t in orbit for t in tried)

    def _leaf(self, order: list[int]) -> None:
        rows = _relabeled_rows(self.adjacency, order)
        if self.first is None:
            self.first = self.best = (rows, order)
            return
        assert self.best is not None
        if rows == self.first[0]:
            self._record(self.first[1], order)
        if rows == self.best[0]:
            if self.best is not self.first:
                self._record(self.best[1], order)
        elif rows < self.best[0]:
            self.best = (rows, order)

    def _record(self, reference: list[int], order: list[int]) -> None:
        mapping = [0] * len(order)
        for a, b in zip(reference, order):
            mapping[a] = b
        automorphism = tuple(mapping)
        if any(a != b for a, b in enumerate(automorphism)):
            self.automorphisms.append(automorphism)


# =============================================================================
# Public API
# =============================================================================

def canonical_form(
    g: LabeledGraph,
    coloring: VertexColoring | None = None,
) -> tuple[CanonicalForm, tuple[int, ...]]:
    """
    Canonical form of a vertex-colored graph.

    Args:
        g: Graph to canonicalize
        coloring: Vertex coloring; uniform when omitted

    Returns:
        Tuple of (canonical form, permutation) where ``permutation[v - 1]`` is
        the canonical label of vertex v, so ``g.relabel(permutation)`` equals
        ``form.graph``. Vertices of different colors are never exchanged.

    Raises:
        ValueError: If the coloring does not cover exactly the vertices of g

    Example:
        >>> p3 = LabeledGraph.from_edge_list(3, [(1, 2), (2, 3)])
        >>> q3 = LabeledGraph.from_edge_list(3, [(2, 1), (1, 3)])
        >>> canonical_form(p3)[0] == canonical_form(q3)[0]
        True
    """
    if coloring is None:
        coloring = VertexColoring.uniform(g.n)
    if coloring.n != g.n:
        raise ValueError(f"Coloring covers {coloring.n} vertices, graph has {g.n}")

    cells = [0] * coloring.color_count
    for v, color in enumerate(coloring.colors):
        cells[color] |= 1 << v

    rows, order = _Search(g.adjacency).run(cells)

    permutation = [0] * g.n
    for i, v in enumerate(order):
        permutation[v] = i + 1
    canonical_colors = tuple(coloring.colors[v] for v in order)

    form = CanonicalForm(LabeledGraph(g.n, rows), VertexColoring(canonical_colors))
    return form, tuple(permutation)


def canonical_rows(adjacency: Sequence[int]) -> tuple[int, ...]:
    """Canonical adjacency rows of an uncolored graph (fast path, no validation)."""
    rows, _ = _Search(adjacency).run([(1 << len(adjacency)) - 1])
    return rows


def hash_of(c: CanonicalForm) -> HashValue:
    """
    Hash value of a canonical form.

    Deterministic across runs and platforms (BLAKE2b over the serialized form).
    """
    raw = hashlib.blake2b(c.serialize().encode("ascii"), digest_size=12).digest()
    return HashValue(tuple(int.from_bytes(raw[i:i + 4], "big") for i in (0, 4, 8)))  # type: ignore[arg-type]


def canon_record(g: LabeledGraph, coloring: VertexColoring | None = None) -> CanonRecord:
    """Canonical form and hash value of one graph."""
    form, _ = canonical_form(g, coloring)
    return CanonRecord(form, hash_of(form))


def is_isomorphic(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    """
    Check whether two graphs are isomorphic.

    Decided by canonical-form equality under the uniform coloring.
    """
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return False
    if g1.degree_signature != g2.degree_signature:
        return False
    return canonical_form(g1)[0] == canonical_form(g2)[0]


def gen_can(
    graphs: Iterable[LabeledGraph | tuple[LabeledGraph, VertexColoring | None]],
) -> list[CanonRecord]:
    """
    Canonical representations and hash values of a collection of graphs.

    Args:
        graphs: Graphs, each optionally paired with a coloring (uniform if None)

    Returns:
        One CanonRecord per input, in input order
    """
    records = []
    for item in graphs:
        if isinstance(item, LabeledGraph):
            records.append(canon_record(item))
        else:
            g, coloring = item
            records.append(canon_record(g, coloring))
    return records
