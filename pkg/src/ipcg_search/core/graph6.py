"""
graph6 encoding and decoding.

The bit packing is done by networkx (``to_graph6_bytes`` and
``from_graph6_bytes``). This module converts to and from LabeledGraph
(vertex v is networkx node v-1) and rejects records that networkx would
accept loosely: characters below ``?``, a long length prefix for n <= 62,
an empty graph and nonzero padding bits.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, Iterator

import networkx as nx

from ipcg_search.core.graph import LabeledGraph

logger = logging.getLogger(__name__)

HEADER = ">>graph6<<"


class Graph6Error(ValueError):
    """Raised when a graph6 record is malformed."""


def _to_networkx(g: LabeledGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((u - 1, v - 1) for u, v in g.edges)
    return h


def write_graph6(g: LabeledGraph) -> str:
    """
    Encode a graph as a graph6 record (no header, no newline).

    Args:
        g: Graph to encode

    Returns:
        ASCII graph6 string
    """
    return nx.to_graph6_bytes(_to_networkx(g), header=False).decode("ascii").strip()


def _record_size(record: str) -> tuple[int, str]:
    if record[0] != "~":
        return ord(record[0]) - 63, record[1:]
    if len(record) < 4 or record[1] == "~":
        raise Graph6Error(f"Malformed length prefix in {record!r}")
    n = 0
    for ch in record[1:4]:
        n = (n << 6) | (ord(ch) - 63)
    if n <= 62:
        raise Graph6Error(f"Long length prefix used for small n={n}")
    return n, record[4:]


def parse_graph6(text: str) -> LabeledGraph:
    """
    Decode one graph6 record.

    Args:
        text: graph6 record without header; surrounding whitespace is ignored

    Returns:
        The encoded LabeledGraph

    Raises:
        Graph6Error: On a malformed length prefix, illegal characters, a wrong
            body length or nonzero padding bits
    """
    record = text.strip()
    if not record:
        raise Graph6Error("Empty graph6 record")

    for ch in record:
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"Illegal character {ch!r} in graph6 record")

    n, body = _record_size(record)
    if n < 1:
        raise Graph6Error(f"graph6 record encodes n={n}; at least one vertex is required")

    try:
        decoded = nx.from_graph6_bytes(record.encode("ascii"))
    except (ValueError, nx.NetworkXError) as e:
        raise Graph6Error(f"Bad graph6 record {record!r}: {e}") from e

    padding = len(body) * 6 - n * (n - 1) // 2
    if padding and (ord(body[-1]) - 63) & ((1 << padding) - 1):
        raise Graph6Error(f"Nonzero padding bits in {record!r}")

    return LabeledGraph.from_edge_list(n, ((u + 1, v + 1) for u, v in decoded.edges))


# =============================================================================
# Files
# =============================================================================

def iter_graph6_lines(lines: Iterable[str]) -> Iterator[LabeledGraph]:
    """Decode graph6 lines, skipping blank lines and a leading header."""
    for lineno, line in enumerate(lines, start=1):
        record = line.strip()
        if not record:
            continue
        if record.startswith(HEADER):
            logger.warning(f"Line {lineno}: stripping graph6 header")
            record = record[len(HEADER):]
            if not record:
                continue
        try:
            yield parse_graph6(record)
        except Graph6Error as e:
            raise Graph6Error(f"Line {lineno}: {e}") from e


def read_graph6_file(filepath: str | Path) -> list[LabeledGraph]:
    """
    Read a graph6 file with one record per line.

    Raises:
        Graph6Error: If any record is malformed (message carries the line number)
    """
    with open(filepath, encoding="ascii") as f:
        graphs = list(iter_graph6_lines(f))
    logger.info(f"Read {len(graphs)} graph(s) from {filepath}")
    return graphs


def write_graph6_file(filepath: str | Path, graphs: Iterable[LabeledGraph]) -> int:
    """Write graphs one record per line; returns the number written."""
    count = 0
    with open(filepath, "w", encoding="ascii") as f:
        for g in graphs:
            f.write(write_graph6(g) + "\n")
            count += 1
    logger.info(f"Wrote {count} graph(s) to {filepath}")
    return count
