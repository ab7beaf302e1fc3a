"""
k-IPCG Search

Enumerates binary witness trees and generates k-interval pairwise
compatibility graphs (k-IPCGs) by randomized edge weights and exhaustive
interval sweeps, writing certificates that can be checked independently.

Example usage:
    >>> from ipcg_search import CampaignConfig, WeightRange, enumerate_graphs, generate
    >>>
    >>> cfg = CampaignConfig(
    ...     k=2,
    ...     leaf_range=WeightRange(1, 20),
    ...     internal_range=WeightRange(1, 50),
    ...     time_budget=60,
    ... )
    >>> result = generate(enumerate_graphs(5), None, cfg)
    >>> len(result.found) + len(result.trivially_known)
    34
"""

from ipcg_search.core.canon import CanonicalForm, canonical_form, gen_can, hash_of
from ipcg_search.core.graph import LabeledGraph, VertexColoring, enumerate_graphs
from ipcg_search.core.graph6 import parse_graph6, read_graph6_file, write_graph6
from ipcg_search.search.certificates import Certificate, read_certificates
from ipcg_search.search.config import (
    CampaignConfig,
    Schedule,
    WeightRange,
    get_default_schedule,
)
from ipcg_search.search.generator import Campaign, create_campaign, generate
from ipcg_search.trees.enumeration import (
    UnrootedBinaryTree,
    gen_binary_trees,
    gen_full_binary_trees,
)
from ipcg_search.trees.weights import WeightAssignment, leaf_distances
from ipcg_search.verify.verifier import Verdict, verify_certificate, verify_file

__version__ = "0.1.0"

__all__ = [
    # Graphs
    "LabeledGraph",
    "VertexColoring",
    "enumerate_graphs",
    "CanonicalForm",
    "canonical_form",
    "gen_can",
    "hash_of",
    "parse_graph6",
    "write_graph6",
    "read_graph6_file",
    # Trees
    "UnrootedBinaryTree",
    "gen_binary_trees",
    "gen_full_binary_trees",
    "WeightAssignment",
    "leaf_distances",
    # Generation
    "CampaignConfig",
    "Schedule",
    "WeightRange",
    "get_default_schedule",
    "Campaign",
    "create_campaign",
    "generate",
    "Certificate",
    "read_certificates",
    # Verification
    "Verdict",
    "verify_certificate",
    "verify_file",
]
