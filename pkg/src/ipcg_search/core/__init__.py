"""Labeled graphs, graph6 and canonical forms."""

from ipcg_search.core.canon import CanonicalForm, HashValue, canonical_form, gen_can, hash_of
from ipcg_search.core.graph import EdgePartition, LabeledGraph, VertexColoring

__all__ = [
    "CanonicalForm",
    "HashValue",
    "canonical_form",
    "gen_can",
    "hash_of",
    "EdgePartition",
    "LabeledGraph",
    "VertexColoring",
]
