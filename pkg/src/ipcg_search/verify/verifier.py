"""
Independent certificate verification.

Rebuilds each witness graph from the certificate's Newick string alone:
the tree is parsed into networkx, every leaf-pair distance is summed along
``nx.shortest_path``, and a pair becomes an edge when its distance lies in
one of the intervals. No distance or sweep code of the generator is used.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Collection

import networkx as nx

from ipcg_search.core.canon import CanonicalForm, canonical_form
from ipcg_search.core.graph import LabeledGraph
from ipcg_search.core.graph6 import write_graph6
from ipcg_search.search.certificates import Certificate, iter_certificate_lines
from ipcg_search.trees.newick import ROOT_NODE, NewickError, parse_newick

logger = logging.getLogger(__name__)


class Clause(str, Enum):
    """Certificate condition that failed."""

    FORMAT = "FORMAT"
    INTERVALS = "INTERVALS"
    TREE = "TREE"
    WEIGHTS = "WEIGHTS"
    GRAPH = "GRAPH"
    TARGET = "TARGET"


@dataclass(frozen=True)
class Verdict:
    """
    Result of verifying one certificate.

    Attributes:
        passed: True when every clause holds
        clause: First violated clause (None on PASS)
        message: Human-readable detail
    """

    passed: bool
    clause: Clause | None = None
    message: str = ""

    @classmethod
    def ok(cls) -> Verdict:
        return cls(True)

    @classmethod
    def fail(cls, clause: Clause, message: str) -> Verdict:
        return cls(False, clause, message)

    def __bool__(self) -> bool:
        return self.passed

    def __str__(self) -> str:
        if self.passed:
            return "PASS"
        return f"FAIL {self.clause.value}: {self.message}"  # type: ignore[union-attr]


class _Rejected(Exception):
    def __init__(self, clause: Clause, message: str):
        super().__init__(message)
        self.clause = clause


# =============================================================================
# Reconstruction
# =============================================================================

def _leaf_tree(cert: Certificate) -> nx.Graph:
    try:
        tree = parse_newick(cert.newick)
    except NewickError as e:
        raise _Rejected(Clause.TREE, str(e)) from e
    leaves = sorted(v for v in tree.nodes if isinstance(v, int))
    if leaves != list(range(1, cert.n + 1)):
        raise _Rejected(Clause.TREE, f"Leaves are {leaves}, expected 1..{cert.n}")
    return tree


def _distance(tree: nx.Graph, a: int, b: int) -> int:
    path = nx.shortest_path(tree, a, b)
    total = 0
    for u, v in zip(path, path[1:]):
        weight = tree.edges[u, v].get("weight")
        if not isinstance(weight, int) or isinstance(weight, bool):
            raise _Rejected(Clause.WEIGHTS, f"Edge {u}-{v} has non-integer weight {weight!r}")
        total += weight
    return total


def _check_sigma(cert: Certificate) -> None:
    if sorted(cert.sigma) != list(range(1, cert.n + 1)):
        raise _Rejected(Clause.FORMAT, f"sigma is not a bijection onto 1..{cert.n}")


def _reconstruct(cert: Certificate, tree: nx.Graph) -> LabeledGraph:
    _check_sigma(cert)
    pairs = []
    for a, b in combinations(range(1, cert.n + 1), 2):
        d = _distance(tree, a, b)
        if any(lo <= d <= hi for lo, hi in cert.intervals):
            pairs.append((cert.sigma[a - 1], cert.sigma[b - 1]))
    return LabeledGraph.from_edge_list(cert.n, pairs)


def reconstruct(cert: Certificate) -> LabeledGraph:
    """
    Graph realized by a certificate's tree, weights, intervals and sigma.

    Leaf pair (a, b) gives edge sigma(a)sigma(b) iff the tree distance
    d(a, b) lies in one of the intervals.

    Raises:
        ValueError: On malformed Newick, a non-bijective sigma or a
            non-integer weight
    """
    try:
        return _reconstruct(cert, _leaf_tree(cert))
    except _Rejected as e:
        raise ValueError(f"{e.clause.value}: {e}") from None


# =============================================================================
# Clauses
# =============================================================================

def _check_intervals(cert: Certificate) -> None:
    if not cert.intervals:
        raise _Rejected(Clause.INTERVALS, "No intervals")
    if len(cert.intervals) > cert.k:
        raise _Rejected(Clause.INTERVALS, f"{len(cert.intervals)} intervals exceed k={cert.k}")
    previous: Fraction | None = None
    for lo, hi in cert.intervals:
        for end in (lo, hi):
            if end.denominator != 2:
                raise _Rejected(Clause.INTERVALS, f"Endpoint {end} is not integer +- 1/2")
        if lo > hi:
            raise _Rejected(Clause.INTERVALS, f"Interval [{lo}, {hi}] is reversed")
        if previous is not None and lo <= previous:
            raise _Rejected(Clause.INTERVALS, f"Interval [{lo}, {hi}] overlaps its predecessor")
        previous = hi


def _check_tree(cert: Certificate, tree: nx.Graph) -> None:
    n = cert.n
    if not nx.is_tree(tree):
        raise _Rejected(Clause.TREE, "Newick graph is not a tree")
    if tree.number_of_nodes() != 2 * n - 2:
        raise _Rejected(
            Clause.TREE, f"Tree has {tree.number_of_nodes()} vertices, expected {2 * n - 2}"
        )
    for v in tree.nodes:
        expected = 1 if isinstance(v, int) else 3
        if tree.degree(v) != expected:
            raise _Rejected(Clause.TREE, f"Vertex {v} has degree {tree.degree(v)}")


def _internal_edges(tree: nx.Graph) -> list[tuple[object, object]]:
    """Internal edges in the order a breadth-first search from the root crosses them."""

    def rank(v: int | str) -> tuple[int, int]:
        return (0, v) if isinstance(v, int) else (1, int(v[1:]))

    return [
        (u, v)
        for u, v in nx.bfs_edges(tree, ROOT_NODE, sort_neighbors=lambda nbrs: sorted(nbrs, key=rank))
        if not isinstance(v, int)
    ]


def _check_weights(cert: Certificate, tree: nx.Graph) -> None:
    n = cert.n
    if len(cert.weights) != 2 * n - 3:
        raise _Rejected(Clause.WEIGHTS, f"{len(cert.weights)} weights for {2 * n - 3} edges")
    for value in cert.weights:
        if not isinstance(value, int) or isinstance(value, bool):
            raise _Rejected(Clause.WEIGHTS, f"Weight {value!r} is not an integer")

    for u, v, data in tree.edges(data=True):
        weight = data.get("weight")
        if not isinstance(weight, int) or isinstance(weight, bool) or weight < 0:
            raise _Rejected(Clause.WEIGHTS, f"Edge {u}-{v} has invalid weight {weight!r}")
        leaf = u if isinstance(u, int) else v if isinstance(v, int) else None
        if leaf is not None:
            if weight != cert.weights[leaf - 1]:
                raise _Rejected(
                    Clause.WEIGHTS,
                    f"Leaf {leaf} edge weighs {weight}, weights list says {cert.weights[leaf - 1]}",
                )
            if weight != 0 and weight not in cert.leaf_range:
                raise _Rejected(Clause.WEIGHTS, f"Leaf weight {weight} outside {cert.leaf_range}")
        elif weight != 0 and weight not in cert.internal_range:
            raise _Rejected(
                Clause.WEIGHTS, f"Internal weight {weight} outside {cert.internal_range}"
            )

    # Newick lists children by ascending vertex id, matching the breadth-first edge indices
    for index, (u, v) in enumerate(_internal_edges(tree), start=n + 1):
        weight = tree.edges[u, v]["weight"]
        if weight != cert.weights[index - 1]:
            raise _Rejected(
                Clause.WEIGHTS,
                f"Internal edge {index} weighs {weight}, weights list says {cert.weights[index - 1]}",
            )


def verify_certificate(
    cert: Certificate,
    targets: Collection[CanonicalForm] | None = None,
) -> Verdict:
    """
    Check that a certificate proves its target is a k-IPCG.

    Clauses, checked in order: FORMAT (sigma is a bijection), INTERVALS
    (at most k, half-integer endpoints, pairwise disjoint), TREE (binary
    tree on leaves 1..n), WEIGHTS (integers in the declared ranges, zeros
    exempt, matching the weights list), GRAPH (the reconstructed graph has
    the certified canonical form and equals the stored graph), and TARGET
    (the canonical form belongs to ``targets``, when given).

    Args:
        cert: Certificate to verify
        targets: Optional canonical forms the certificate must belong to

    Returns:
        Verdict; never raises on a bad certificate
    """
    try:
        _check_sigma(cert)
        _check_intervals(cert)
        tree = _leaf_tree(cert)
        _check_tree(cert, tree)
        _check_weights(cert, tree)

        graph = _reconstruct(cert, tree)
        form, _ = canonical_form(graph)
        if form != cert.target:
            raise _Rejected(
                Clause.GRAPH, f"Rebuilt graph has canonical form {form}, certificate says {cert.target}"
            )
        if write_graph6(graph) != cert.graph:
            raise _Rejected(Clause.GRAPH, "Rebuilt graph differs from the stored graph")
        if targets is not None and cert.target not in targets:
            raise _Rejected(Clause.TARGET, f"{cert.target} is not among the targets")
    except _Rejected as e:
        return Verdict.fail(e.clause, str(e))
    return Verdict.ok()


def verify_file(
    filepath: str | Path,
    targets: Collection[CanonicalForm] | None = None,
) -> list[tuple[int, Verdict]]:
    """
    Verify every record of a certificate file.

    Unparsable records fail with clause FORMAT.

    Returns:
        (line number, verdict) per nonblank line
    """
    results = []
    for lineno, line in iter_certificate_lines(filepath):
        try:
            cert = Certificate.from_json(line)
        except ValueError as e:
            verdict = Verdict.fail(Clause.FORMAT, str(e))
        else:
            verdict = verify_certificate(cert, targets)
        if not verdict:
            logger.error(f"Line {lineno}: {verdict}")
        results.append((lineno, verdict))
    return results
