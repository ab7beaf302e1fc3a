"""Witness tree enumeration, edge weights and Newick."""

from ipcg_search.trees.enumeration import UnrootedBinaryTree, gen_binary_trees
from ipcg_search.trees.weights import WeightAssignment, leaf_distances

__all__ = ["UnrootedBinaryTree", "gen_binary_trees", "WeightAssignment", "leaf_distances"]
