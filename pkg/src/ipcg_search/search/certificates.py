"""
Certificates proving that a graph is a k-IPCG, and their file format.

A certificate stores the witness tree (weighted Newick), its weights by edge
index, the k intervals, and the bijection sigma from leaves to graph
vertices. Certificate files hold one JSON object per line; intervals are
written as decimal strings ("2.5") so they round-trip exactly.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

from ipcg_search.core.canon import CanonicalForm
from ipcg_search.core.graph import LabeledGraph
from ipcg_search.core.graph6 import write_graph6
from ipcg_search.search.config import WeightRange
from ipcg_search.trees.enumeration import UnrootedBinaryTree, gen_binary_trees
from ipcg_search.trees.newick import to_newick
from ipcg_search.trees.weights import WeightAssignment

logger = logging.getLogger(__name__)

ORIGIN_SWEEP = "sweep"
ORIGIN_DIRECT = "direct"


# =============================================================================
# Certificate
# =============================================================================

@dataclass(frozen=True)
class Certificate:
    """
    Witness that ``target`` is a k-IPCG.

    Attributes:
        target: Canonical form of the identified graph
        n: Number of vertices / leaves
        k: Interval budget of the campaign
        tree_index: 1-based index of the witness tree in gen_binary_trees(n)
        newick: Weighted Newick of the witness tree
        weights: Edge weights by edge index 1..2n-3
        intervals: Disjoint half-integer intervals (lo, hi)
        sigma: ``sigma[i - 1]`` is the graph vertex of leaf i
        graph: graph6 of the graph the witness builds (vertices labeled via sigma)
        leaf_range: Declared pendant-edge weight range
        internal_range: Declared internal-edge weight range
        phase: Schedule phase index
        round: Round number within the campaign (0 for direct witnesses)
        seed: Campaign seed
        origin: ``"sweep"`` or ``"direct"``
    """

    target: CanonicalForm
    n: int
    k: int
    tree_index: int
    newick: str
    weights: tuple[int, ...]
    intervals: tuple[tuple[Fraction, Fraction], ...]
    sigma: tuple[int, ...]
    graph: str
    leaf_range: WeightRange
    internal_range: WeightRange
    phase: int = 0
    round: int = 0
    seed: int = 0
    origin: str = ORIGIN_SWEEP

    # -------------------------------------------------------------------------
    # Serialization
    # -------------------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "target": self.target.serialize(),
            "n": self.n,
            "k": self.k,
            "tree_index": self.tree_index,
            "newick": self.newick,
            "weights": list(self.weights),
            "intervals": [[_decimal(lo), _decimal(hi)] for lo, hi in self.intervals],
            "sigma": list(self.sigma),
            "graph": self.graph,
            "leaf_range": self.leaf_range.as_list(),
            "internal_range": self.internal_range.as_list(),
            "phase": self.phase,
            "round": self.round,
            "seed": self.seed,
            "origin": self.origin,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> Certificate:
        """
        Rebuild a certificate from its JSON object.

        Raises:
            ValueError: If a field is missing or malformed
        """
        try:
            return cls(
                target=CanonicalForm.deserialize(data["target"]),
                n=int(data["n"]),
                k=int(data["k"]),
                tree_index=int(data["tree_index"]),
                newick=str(data["newick"]),
                weights=tuple(data["weights"]),
                intervals=tuple(
                    (Fraction(str(lo)), Fraction(str(hi))) for lo, hi in data["intervals"]
                ),
                sigma=tuple(int(v) for v in data["sigma"]),
                graph=str(data["graph"]),
                leaf_range=WeightRange(*data["leaf_range"]),
                internal_range=WeightRange(*data["internal_range"]),
                phase=int(data.get("phase", 0)),
                round=int(data.get("round", 0)),
                seed=int(data.get("seed", 0)),
                origin=str(data.get("origin", ORIGIN_SWEEP)),
            )
        except KeyError as e:
            raise ValueError(f"Certificate is missing field {e.args[0]!r}") from None
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Malformed certificate: {e}") from e

    @classmethod
    def from_json(cls, line: str) -> Certificate:
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise ValueError(f"Certificate line is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ValueError("Certificate line must hold a JSON object")
        return cls.from_dict(data)


def _decimal(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    if value.denominator == 2:
        whole = abs(value.numerator) // 2
        sign = "-" if value < 0 else ""
        return f"{sign}{whole}.5"
    return f"{value.numerator}/{value.denominator}"


# =============================================================================
# Certificate files
# =============================================================================

def append_certificates(filepath: str | Path, certificates: Iterable[Certificate]) -> int:
    """Append certificates to a JSON-lines file; returns the number written."""
    count = 0
    with open(filepath, "a", encoding="utf-8") as f:
        for cert in certificates:
            f.write(cert.to_json() + "\n")
            count += 1
    return count


def iter_certificate_lines(filepath: str | Path) -> Iterator[tuple[int, str]]:
    """(line number, text) for each nonblank line of a certificate file."""
    with open(filepath, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if line.strip():
                yield lineno, line


def read_certificates(filepath: str | Path) -> list[Certificate]:
    """
    Load every certificate of a file.

    Raises:
        ValueError: If a record is malformed (message carries the line number)
    """
    certificates = []
    for lineno, line in iter_certificate_lines(filepath):
        try:
            certificates.append(Certificate.from_json(line))
        except ValueError as e:
            raise ValueError(f"Line {lineno}: {e}") from e
    return certificates


def truncate_certificates(filepath: str | Path, keep: int) -> int:
    """
    Keep only the first ``keep`` records of a certificate file.

    Records appended after the last saved state are dropped on resume.
    Returns the number of records removed.
    """
    path = Path(filepath)
    if not path.exists():
        return 0
    with open(path, encoding="utf-8") as f:
        lines = [line for line in f if line.strip()]
    if len(lines) <= keep:
        return 0
    with open(path, "w", encoding="utf-8") as f:
        f.writelines(lines[:keep])
    return len(lines) - keep


# =============================================================================
# Direct witnesses for graphs with fewer than three edges
# =============================================================================

def _cherries(tree: UnrootedBinaryTree) -> list[tuple[int, int]]:
    """Leaf pairs sharing a neighbor, by parent vertex."""
    cherries = []
    for v in tree.internal_vertices:
        leaves = [u for u in tree.neighbors(v) if u <= tree.n]
        if len(leaves) >= 2:
            cherries.append((leaves[0], leaves[1]))
    return cherries


def direct_certificate(
    target: CanonicalForm,
    k: int,
    leaf_range: WeightRange,
    internal_range: WeightRange,
    seed: int = 0,
) -> Certificate:
    """
    Witness for a graph with at most two edges, built on cherries of T_1.

    With a large weight M on chosen pendant edges and 1 elsewhere:

    - no edges: the interval [1/2, 3/2] misses every distance
    - one edge xy: a cherry (a, b) with w_a = w_b = M isolates d(a, b) = 2M
    - a path xyz: cherry (a, b) plus a leaf c with w_b = 3M, w_a = w_c = M;
      only d(a, b) and d(b, c) fall in [4M - 1/2, 4M + n + 1/2]
    - two disjoint edges: two cherries with all four weights M isolate the
      two pairs at distance exactly 2M

    The declared ranges are widened to cover the weights used.

    Raises:
        ValueError: If n < 3 or the target has three or more edges
    """
    g = target.graph
    n = g.n
    if n < 3:
        raise ValueError(f"Direct witnesses need n >= 3, got {n}")
    edges = g.edges
    if len(edges) > 2:
        raise ValueError(f"Direct witnesses cover graphs with < 3 edges, got {len(edges)}")

    tree = gen_binary_trees(n)[0]
    cherries = _cherries(tree)
    weights = [1] * tree.edge_count
    leaf_to_vertex: dict[int, int] = {}
    big = 3 * n

    def set_leaf(leaf: int, vertex: int, value: int) -> None:
        leaf_to_vertex[leaf] = vertex
        weights[leaf - 1] = value

    if not edges:
        intervals = [(Fraction(1, 2), Fraction(3, 2))]
    elif len(edges) == 1:
        (x, y), (a, b) = edges[0], cherries[0]
        set_leaf(a, x, big)
        set_leaf(b, y, big)
        intervals = [(2 * big - Fraction(1, 2), 2 * big + Fraction(1, 2))]
    else:
        (x1, y1), (x2, y2) = edges
        shared = {x1, y1} & {x2, y2}
        a, b = cherries[0]
        if shared:
            (mid,) = shared
            ends = sorted(({x1, y1} | {x2, y2}) - shared)
            c = next(leaf for leaf in tree.leaves if leaf not in (a, b))
            set_leaf(b, mid, 3 * big)
            set_leaf(a, ends[0], big)
            set_leaf(c, ends[1], big)
            intervals = [(4 * big - Fraction(1, 2), 4 * big + n + Fraction(1, 2))]
        else:
            c, e = cherries[1]
            for leaf, vertex in ((a, x1), (b, y1), (c, x2), (e, y2)):
                set_leaf(leaf, vertex, big)
            intervals = [(2 * big - Fraction(1, 2), 2 * big + Fraction(1, 2))]

    free_vertices = iter(v for v in range(1, n + 1) if v not in leaf_to_vertex.values())
    sigma = tuple(
        leaf_to_vertex[leaf] if leaf in leaf_to_vertex else next(free_vertices)
        for leaf in tree.leaves
    )

    w = WeightAssignment(tuple(weights))
    top = max(w.leaf_weights(n))
    return Certificate(
        target=target,
        n=n,
        k=k,
        tree_index=1,
        newick=to_newick(tree, w),
        weights=w.weights,
        intervals=tuple(intervals),
        sigma=sigma,
        graph=write_graph6(LabeledGraph.from_edge_list(n, edges)),
        leaf_range=WeightRange(min(leaf_range.low, 1), max(leaf_range.high, top)),
        internal_range=WeightRange(min(internal_range.low, 1), internal_range.high),
        seed=seed,
        origin=ORIGIN_DIRECT,
    )
