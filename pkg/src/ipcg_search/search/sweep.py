"""
Interval sweep over the distinct leaf distances of one weighted tree.

For a weighted tree with distinct leaf distances d_1 < ... < d_l, an interval
tuple (h_1, ..., h_2k) picks k disjoint integer blocks [d_h1, d_h2], ...; the
graph joins every leaf pair whose distance falls in one of the blocks
(equivalently in [d_h(2j-1) - 1/2, d_h(2j) + 1/2]). Prefix sums over the
per-distance pair counts give each tuple's edge count without building the
graph, so tuples whose edge count has no remaining target are skipped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from ipcg_search.core.graph import LabeledGraph, vertex_pairs
from ipcg_search.search.config import CampaignConfig
from ipcg_search.trees.weights import DistanceTable, WeightAssignment

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


# =============================================================================
# Weight sampling
# =============================================================================

def sample_weights(rng: np.random.Generator, n: int, cfg: CampaignConfig) -> WeightAssignment:
    """
    Draw one random weight vector for trees with n leaves.

    Leaf edges 1..n are uniform on the leaf range, internal edges n+1..2n-3
    uniform on the internal range (both inclusive).

    Args:
        rng: numpy Generator
        n: Number of leaves (>= 3)
        cfg: Campaign configuration supplying the ranges

    Returns:
        WeightAssignment of length 2n-3

    Raises:
        ValueError: If n < 3
    """
    if n < 3:
        raise ValueError(f"Weight sampling needs n >= 3, got {n}")
    leaf = rng.integers(cfg.leaf_range.low, cfg.leaf_range.high + 1, size=n)
    internal = rng.integers(cfg.internal_range.low, cfg.internal_range.high + 1, size=n - 3)
    return WeightAssignment.of(np.concatenate([leaf, internal]))


# =============================================================================
# Distinct distances
# =============================================================================

@dataclass(frozen=True)
class DistinctDistances:
    """
    Sorted distinct leaf distances with pair counts and prefix sums.

    Attributes:
        values: d_1 < ... < d_l
        multiplicity: S_i, number of leaf pairs at distance d_i
        prefix: prefix[0] = 0, prefix[i] = prefix[i-1] + S_i
    """

    values: tuple[int, ...]
    multiplicity: tuple[int, ...]
    prefix: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.multiplicity) or len(self.prefix) != len(self.values) + 1:
            raise ValueError("values, multiplicity and prefix lengths disagree")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("Distinct distances must be strictly increasing")

    @property
    def ell(self) -> int:
        """Number of distinct distances l."""
        return len(self.values)

    @property
    def pair_count(self) -> int:
        return self.prefix[-1]


def distinct_distances(d: DistanceTable) -> DistinctDistances:
    """
    Distinct distances of a distance table, with multiplicities and prefix sums.

    Example:
        Pendant weights (1, 2, 3) on the 3-leaf star give values (3, 4, 5),
        multiplicity (1, 1, 1) and prefix (0, 1, 2, 3).
    """
    values, counts = np.unique(d.values, return_counts=True)
    prefix = np.concatenate([[0], np.cumsum(counts)])
    return DistinctDistances(
        tuple(int(v) for v in values),
        tuple(int(c) for c in counts),
        tuple(int(p) for p in prefix),
    )


# =============================================================================
# Interval tuples
# =============================================================================

@dataclass(frozen=True)
class IntervalTuple:
    """
    1-based indices (h_1, ..., h_2k) into the distinct distances.

    Each consecutive pair (h_2j-1, h_2j) is one interval; h_2j-1 <= h_2j
    and h_2j < h_2j+1, so the intervals are disjoint.
    """

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        h = self.indices
        if not h or len(h) % 2:
            raise ValueError(f"An interval tuple needs an even, nonzero length, got {h}")
        if h[0] < 1:
            raise ValueError(f"Interval indices are 1-based, got {h}")
        for j in range(0, len(h), 2):
            if h[j] > h[j + 1]:
                raise ValueError(f"Interval {j // 2 + 1} has h_lo > h_hi in {h}")
            if j + 2 < len(h) and h[j + 1] >= h[j + 2]:
                raise ValueError(f"Intervals {j // 2 + 1} and {j // 2 + 2} overlap in {h}")

    @property
    def k(self) -> int:
        """Effective number of intervals."""
        return len(self.indices) // 2

    def blocks(self) -> Iterator[tuple[int, int]]:
        """(h_lo, h_hi) per interval."""
        h = self.indices
        for j in range(0, len(h), 2):
            yield h[j], h[j + 1]

    def intervals(self, dd: DistinctDistances) -> list[tuple[Fraction, Fraction]]:
        """Half-integer intervals [d_lo - 1/2, d_hi + 1/2]."""
        return [(dd.values[a - 1] - HALF, dd.values[b - 1] + HALF) for a, b in self.blocks()]


def _blocks_from(start: int, ell: int, count: int) -> Iterator[tuple[int, ...]]:
    for lo in range(start, ell + 1):
        for hi in range(lo, ell + 1):
            if count == 1:
                yield (lo, hi)
            else:
                for rest in _blocks_from(hi + 1, ell, count - 1):
                    yield (lo, hi) + rest


def enumerate_interval_tuples(ell: int, k: int, exact: bool = False) -> Iterator[IntervalTuple]:
    """
    All valid interval tuples over l distinct distances.

    Tuples with k' = 1, ..., k intervals are produced in that order (a
    k'-interval graph is also a k-interval graph); ``exact`` restricts the
    output to k' = k.

    Args:
        ell: Number of distinct distances (>= 1)
        k: Maximum number of intervals (>= 1)
        exact: Only produce tuples with exactly k intervals

    Yields:
        IntervalTuple, lexicographic within each k'

    Example:
        >>> sum(1 for _ in enumerate_interval_tuples(3, 1))
        6
    """
    if ell < 1 or k < 1:
        raise ValueError(f"Need ell >= 1 and k >= 1, got ell={ell}, k={k}")
    for count in range(k if exact else 1, k + 1):
        for indices in _blocks_from(1, ell, count):
            yield IntervalTuple(indices)


def edge_count_of(t: IntervalTuple, dd: DistinctDistances) -> int:
    """
    Edge count of the graph a tuple builds: sum of prefix[h_hi] - prefix[h_lo - 1].

    Raises:
        ValueError: If an index exceeds the number of distinct distances
    """
    if t.indices[-1] > dd.ell:
        raise ValueError(f"Tuple {t.indices} exceeds ell={dd.ell}")
    return sum(dd.prefix[b] - dd.prefix[a - 1] for a, b in t.blocks())


def build_graph(d: DistanceTable, t: IntervalTuple, dd: DistinctDistances) -> LabeledGraph:
    """
    Graph on the leaves joining every pair whose distance lies in an interval.

    Leaf i becomes vertex i (identity bijection).
    """
    if t.indices[-1] > dd.ell:
        raise ValueError(f"Tuple {t.indices} exceeds ell={dd.ell}")
    inside = np.zeros(d.values.shape, dtype=bool)
    for a, b in t.blocks():
        inside |= (d.values >= dd.values[a - 1]) & (d.values <= dd.values[b - 1])
    pairs = vertex_pairs(d.n)
    return LabeledGraph.from_edge_list(d.n, (pairs[i] for i in np.flatnonzero(inside)))


# =============================================================================
# Fast sweep over one tree
# =============================================================================

class SweepTables:
    """
    Cumulative pair masks and adjacency rows per distinct-distance class.

    Classes partition the leaf pairs, so the pairs with distance in
    [d_a, d_b] are ``cum[b] ^ cum[a - 1]`` for both the pair bitmask and
    every adjacency row.
    """

    def __init__(self, distances: np.ndarray, n: int):
        values, inverse = np.unique(distances, return_inverse=True)
        ell = len(values)
        pairs = vertex_pairs(n)

        class_masks = [0] * ell
        class_rows = [[0] * n for _ in range(ell)]
        for i, c in enumerate(inverse.tolist()):
            u, v = pairs[i]
            class_masks[c] |= 1 << i
            class_rows[c][u - 1] |= 1 << (v - 1)
            class_rows[c][v - 1] |= 1 << (u - 1)

        counts = np.bincount(inverse, minlength=ell)
        self.dd = DistinctDistances(
            tuple(int(v) for v in values),
            tuple(int(c) for c in counts),
            (0,) + tuple(int(p) for p in np.cumsum(counts)),
        )
        self.n = n
        self.cum_masks = [0]
        self.cum_rows: list[tuple[int, ...]] = [(0,) * n]
        for c in range(ell):
            self.cum_masks.append(self.cum_masks[-1] | class_masks[c])
            self.cum_rows.append(
                tuple(r | s for r, s in zip(self.cum_rows[-1], class_rows[c]))
            )

    def mask(self, t: IntervalTuple) -> int:
        """Pair bitmask of the tuple's graph."""
        mask = 0
        for a, b in t.blocks():
            mask |= self.cum_masks[b] ^ self.cum_masks[a - 1]
        return mask

    def rows(self, t: IntervalTuple) -> tuple[int, ...]:
        """Adjacency rows of the tuple's graph."""
        rows = [0] * self.n
        for a, b in t.blocks():
            hi, lo = self.cum_rows[b], self.cum_rows[a - 1]
            for v in range(self.n):
                rows[v] |= hi[v] ^ lo[v]
        return tuple(rows)


@dataclass(frozen=True)
class Candidate:
    """A distinct graph produced by one tuple of a tree sweep."""

    interval_tuple: IntervalTuple
    edge_count: int
    mask: int
    rows: tuple[int, ...]


def sweep(
    distances: np.ndarray,
    n: int,
    k: int,
    wanted_edge_counts: Sequence[int] | frozenset[int] | set[int],
) -> Iterator[Candidate]:
    """
    Sweep all interval tuples for one distance vector.

    Tuples whose edge count has no remaining target are skipped before any
    graph is built, and each distinct labeled graph is produced once (for
    the first tuple building it).

    Args:
        distances: Leaf-pair distances in pair order
        n: Number of leaves
        k: Maximum number of intervals
        wanted_edge_counts: Edge counts with at least one remaining target

    Yields:
        Candidate per distinct graph, in tuple enumeration order
    """
    wanted = frozenset(wanted_edge_counts)
    tables = SweepTables(distances, n)
    dd = tables.dd
    seen: set[int] = set()
    for t in enumerate_interval_tuples(dd.ell, k):
        p = sum(dd.prefix[b] - dd.prefix[a - 1] for a, b in t.blocks())
        if p not in wanted:
            continue
        mask = tables.mask(t)
        if mask in seen:
            continue
        seen.add(mask)
        yield Candidate(t, p, mask, tables.rows(t))
