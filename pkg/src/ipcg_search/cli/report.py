"""
Plain-text progress tables for campaign snapshots.
"""

from __future__ import annotations

import logging
from typing import Any

logger = logging.getLogger(__name__)


def render_checkpoint_table(rows: list[dict[str, Any]]) -> str:
    """Checkpoint rows as an aligned table."""
    lines = [
        f"{'Time (sec.)':>12}  {'#Rounds':>8}  {'#Identified':>12}  {'#Remaining':>11}  {'Phase':>5}",
        "─" * 58,
    ]
    for row in rows:
        lines.append(
            f"{row['elapsed']:>12.1f}  {row['rounds']:>8}  {row['identified']:>12}  "
            f"{row['remaining']:>11}  {row['phase']:>5}"
        )
    return "\n".join(lines)


def render_tree_tallies(tallies: dict[str, int]) -> str:
    """Identifications per witness tree, plus the total."""
    if not tallies:
        return "  (no sweep identifications yet)"
    lines = [f"  T{index:<4} {count:>10}" for index, count in sorted(
        ((int(i), c) for i, c in tallies.items())
    )]
    lines.append(f"  {'total':<5} {sum(tallies.values()):>10}")
    return "\n".join(lines)


def render_report(snapshot: dict[str, Any]) -> str:
    """
    Full report for a campaign snapshot.

    Args:
        snapshot: Parsed state.json

    Returns:
        Multi-line text: summary, checkpoint table and per-tree tallies
    """
    total = snapshot["total_targets"]
    trivial = snapshot["trivially_known_count"]
    found = snapshot["found_count"]
    remaining = len(snapshot["remaining"])
    schedule = snapshot.get("schedule") or {}

    lines = [
        f"Campaign: n={snapshot['n']}, k={snapshot['k']}, seed={snapshot['seed']}, "
        f"schedule={schedule.get('name', 'unknown')}",
        f"Targets: {total}  trivially known: {trivial}  identified: {found}  "
        f"remaining: {remaining}",
        f"Position: phase {snapshot['phase_index']}, {snapshot['rounds_completed']} round(s), "
        f"{snapshot['elapsed']:.1f}s",
        "",
        render_checkpoint_table(snapshot["checkpoints"]),
        "",
        "Identified per tree:",
        render_tree_tallies(snapshot["tree_tallies"]),
    ]
    tallied = sum(snapshot["tree_tallies"].values())
    expected = total - trivial - remaining
    if tallied == expected:
        lines.append(
            f"Tree tallies sum to {tallied} = {total} targets - {trivial} trivially known "
            f"- {remaining} remaining"
        )
    else:
        lines.append(
            f"MISMATCH: tree tallies sum to {tallied}, but {total} targets - {trivial} "
            f"trivially known - {remaining} remaining = {expected}"
        )
        logger.warning(f"Tree tallies sum to {tallied}, expected {expected}")
    if trivial + found + remaining != total:
        logger.warning(
            f"Snapshot accounting is off: {trivial} + {found} + {remaining} != {total}"
        )
    return "\n".join(lines)
