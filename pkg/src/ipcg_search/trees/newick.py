"""
Newick export and parsing for witness trees.

Trees are written rooted at the first internal vertex (n+1) as a
trifurcation, leaves named by their numbers and internal vertices unnamed.
Weighted output carries branch lengths, e.g. ``(1:4,2:7,(3:2,4:5):1);``.
Reading goes through ``Bio.Phylo``.
"""

from __future__ import annotations

import logging
from io import StringIO
from itertools import count

import networkx as nx
from Bio import Phylo
from Bio.Phylo import NewickIO
from Bio.Phylo.Newick import Clade

from ipcg_search.trees.enumeration import UnrootedBinaryTree
from ipcg_search.trees.weights import WeightAssignment

logger = logging.getLogger(__name__)

ROOT_NODE = "#0"


class NewickError(ValueError):
    """Raised when a Newick string cannot be parsed."""


def to_newick(t: UnrootedBinaryTree, w: WeightAssignment | None = None) -> str:
    """
    Newick string of a binary tree.

    Args:
        t: Binary tree (must be indexed when weights are given)
        w: Optional weights, written as branch lengths

    Returns:
        Newick string terminated by ``;``
    """
    if w is not None and len(w) != t.edge_count:
        raise ValueError(f"{len(w)} weights given for a tree with {t.edge_count} edges")

    def length(a: int, b: int) -> str:
        return "" if w is None else f":{w[t.index_of(a, b)]}"

    if t.n == 2:
        return f"(1{length(1, 2)},2:0);" if w is not None else "(1,2);"

    def subtree(v: int, parent: int) -> str:
        if v <= t.n:
            return f"{v}{length(parent, v)}"
        inner = ",".join(subtree(c, v) for c in t.neighbors(v) if c != parent)
        return f"({inner}){length(parent, v)}"

    root = t.n + 1
    return "(" + ",".join(subtree(c, root) for c in t.neighbors(root)) + ");"


def parse_newick(text: str) -> nx.Graph:
    """
    Parse a Newick string into an undirected networkx tree.

    The string is read with ``Bio.Phylo`` and its clades are copied into a
    networkx graph. Leaf labels must be positive integers and become the
    node ids; internal clades get string ids ``"#0"``, ``"#1"``, ... in
    preorder, the root being ROOT_NODE. Branch lengths are stored as the
    ``weight`` edge attribute: ``int`` when integral, ``float`` otherwise,
    absent when omitted. A root branch length is ignored.

    Args:
        text: One Newick tree ending in ``;``

    Returns:
        networkx.Graph of the tree

    Raises:
        NewickError: On unbalanced parentheses, a missing terminator, a
            non-integer leaf label, a duplicated leaf or a bad branch length
    """
    s = text.strip()
    if not s.endswith(";"):
        raise NewickError("Newick string must end with ';'")
    try:
        parsed = Phylo.read(StringIO(s), "newick")
    except (NewickIO.NewickError, ValueError) as e:
        raise NewickError(f"Malformed Newick string: {e}") from e

    if parsed.root.is_terminal():
        raise NewickError("Newick string has no leaves")
    if parsed.root.branch_length is not None:
        logger.debug(f"Ignoring root branch length {parsed.root.branch_length}")

    g = nx.Graph()
    internal = count()

    def add_clade(clade: Clade) -> object:
        if clade.is_terminal():
            node: object = _leaf_id(g, clade)
            g.add_node(node)
            return node
        node = f"#{next(internal)}"
        g.add_node(node)
        for child in clade.clades:
            child_node = add_clade(child)
            if child.branch_length is None:
                g.add_edge(node, child_node)
            else:
                g.add_edge(node, child_node, weight=_length(child.branch_length))
        return node

    add_clade(parsed.root)
    return g


def _leaf_id(g: nx.Graph, clade: Clade) -> int:
    label = (clade.name or "").strip()
    if not label:
        raise NewickError("Newick string contains an unnamed leaf")
    if not label.isdigit() or int(label) < 1:
        raise NewickError(f"Leaf label must be a positive integer, got {label!r}")
    leaf = int(label)
    if leaf in g:
        raise NewickError(f"Leaf {leaf} appears more than once")
    return leaf


def _length(value: float) -> int | float:
    value = float(value)
    return int(value) if value.is_integer() else value
