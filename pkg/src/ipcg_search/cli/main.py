#!/usr/bin/env python3
"""
Command-line interface for k-IPCG generation.

Enumerates witness trees and graphs, runs resumable generation campaigns,
verifies certificate files and prints campaign progress tables.

Usage:
    ipcg-cli trees 8                          # Binary trees with 8 leaves
    ipcg-cli generate --n 5 --k 1 --time 60   # Identify all 5-vertex 1-IPCGs
    ipcg-cli verify ipcg-out/certificates.jsonl
    ipcg-cli --help                           # Show help
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from enum import IntEnum
from pathlib import Path

import numpy as np

from ipcg_search.cli.report import render_report
from ipcg_search.core.canon import gen_can
from ipcg_search.core.graph import LabeledGraph, enumerate_graphs
from ipcg_search.core.graph6 import read_graph6_file, write_graph6
from ipcg_search.search.config import (
    DEFAULT_CHECKPOINT_INTERVAL,
    DEFAULT_SCHEDULES,
    Schedule,
    WeightRange,
    get_default_schedule,
    parse_tree_list,
)
from ipcg_search.search.generator import REPORT_FILE, STATE_FILE, create_campaign
from ipcg_search.search.state import load_snapshot
from ipcg_search.trees.enumeration import gen_binary_trees
from ipcg_search.trees.newick import to_newick
from ipcg_search.verify.verifier import verify_file

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    datefmt="%H:%M:%S",
)
logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "IPCG_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "ipcg-out"
MAX_TREE_LEAVES = 16
MAX_ENUMERATED_VERTICES = 10
DEFAULT_LEAF_RANGE = "1:20"
DEFAULT_INTERNAL_RANGE = "1:50"


class ExitCode(IntEnum):
    OK = 0
    INPUT_ERROR = 2
    VERIFY_FAILED = 3
    BUDGET_EXHAUSTED = 4


def default_output_dir() -> Path:
    """Output directory from IPCG_OUTPUT_DIR, else ./ipcg-out."""
    return Path(os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR))


# =============================================================================
# trees / graphs
# =============================================================================

def cmd_trees(n: int) -> ExitCode:
    """Print the witness trees with n leaves."""
    if not 2 <= n <= MAX_TREE_LEAVES:
        print(f"  Error: n must be in 2..{MAX_TREE_LEAVES}, got {n}")
        return ExitCode.INPUT_ERROR
    trees = gen_binary_trees(n)
    for i, tree in enumerate(trees, start=1):
        print(f"T{i:<4} {to_newick(tree)}")
    print(f"# {len(trees)} binary tree(s) with {n} leaves")
    return ExitCode.OK


def cmd_graphs(n: int, sample: int | None, seed: int, out: Path | None) -> ExitCode:
    """Write all graphs on n vertices, or a seeded sample of them, as graph6."""
    if not 1 <= n <= MAX_ENUMERATED_VERTICES:
        print(f"  Error: n must be in 1..{MAX_ENUMERATED_VERTICES}, got {n}")
        return ExitCode.INPUT_ERROR
    graphs = enumerate_graphs(n)
    if sample is not None:
        if not 0 < sample <= len(graphs):
            print(f"  Error: sample size must be in 1..{len(graphs)}, got {sample}")
            return ExitCode.INPUT_ERROR
        rng = np.random.default_rng(seed)
        picked = sorted(rng.choice(len(graphs), size=sample, replace=False).tolist())
        graphs = [graphs[i] for i in picked]

    lines = [write_graph6(g) for g in graphs]
    if out is None:
        for line in lines:
            print(line)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        print(f"  Wrote {len(lines)} graph(s) on {n} vertices to {out}")
    return ExitCode.OK


# =============================================================================
# generate
# =============================================================================

def _load_targets(args: argparse.Namespace) -> list[LabeledGraph]:
    if args.targets is not None:
        return read_graph6_file(args.targets)
    if args.n is None:
        raise ValueError("Give --targets FILE or --n N")
    if not 3 <= args.n <= MAX_ENUMERATED_VERTICES:
        raise ValueError(f"--n must be in 3..{MAX_ENUMERATED_VERTICES}, got {args.n}")
    return enumerate_graphs(args.n)


def _build_schedule(args: argparse.Namespace) -> Schedule:
    if args.schedule is not None:
        path = Path(args.schedule)
        if path.is_file():
            return Schedule.from_file(path)
        return get_default_schedule(args.schedule)
    trees = parse_tree_list(args.trees) if args.trees else None
    return Schedule.single(
        WeightRange.parse(args.leaf_range or DEFAULT_LEAF_RANGE),
        WeightRange.parse(args.internal_range or DEFAULT_INTERNAL_RANGE),
        args.time,
        trees,
        args.rounds,
    )


def _reject_phase_flags(args: argparse.Namespace) -> None:
    given = [
        flag
        for flag, value in (
            ("--leaf-range", args.leaf_range),
            ("--internal-range", args.internal_range),
            ("--trees", args.trees),
            ("--rounds", args.rounds),
        )
        if value is not None
    ]
    if given:
        flags = ", ".join(given)
        raise ValueError(
            f"{flags} need --schedule or --time when resuming; "
            "otherwise the snapshot schedule is used"
        )


def cmd_generate(args: argparse.Namespace) -> ExitCode:
    """Run or resume a campaign and write its artifacts."""
    out_dir = Path(args.out) if args.out else default_output_dir()
    k = args.k
    if args.resume:
        data = load_snapshot(out_dir / STATE_FILE)
        explicit = args.schedule is not None or args.time is not None
        if not explicit:
            _reject_phase_flags(args)
        schedule = _build_schedule(args) if explicit else Schedule.from_dict(data["schedule"])
        k = k if k is not None else data["k"]
        targets = None
    else:
        if args.time is None and args.schedule is None:
            args.time = 60.0
        schedule = _build_schedule(args)
        targets = _load_targets(args)
        k = k if k is not None else 2

    print(f"\n  Campaign: k={k}, schedule '{schedule.name}' ({len(schedule)} phase(s)), "
          f"output {out_dir}")
    with create_campaign(
        targets,
        schedule,
        k=k,
        out_dir=out_dir,
        seed=args.seed,
        threads=args.threads,
        checkpoint_interval=args.checkpoint_interval,
        round_rows=not args.interval_rows_only,
        resume=args.resume,
    ) as campaign:
        state = campaign.run()

    report = render_report(load_snapshot(out_dir / STATE_FILE))
    (out_dir / REPORT_FILE).write_text(report + "\n", encoding="utf-8")
    print()
    print(report)
    print()
    if state.remaining:
        print(f"  Budget exhausted with {state.remaining_count} target(s) remaining")
        return ExitCode.BUDGET_EXHAUSTED
    print(f"  All {state.total_targets} target(s) identified")
    return ExitCode.OK


# =============================================================================
# verify / report
# =============================================================================

def cmd_verify(certificates: Path, targets: Path | None) -> ExitCode:
    """Verify every record of a certificate file."""
    forms = None
    if targets is not None:
        forms = {record.form for record in gen_can(read_graph6_file(targets))}
    results = verify_file(certificates, forms)
    passed = sum(1 for _, verdict in results if verdict)
    for lineno, verdict in results:
        print(f"  line {lineno:<6} {verdict}")
    print(f"\n  {passed}/{len(results)} passed")
    if passed != len(results):
        return ExitCode.VERIFY_FAILED
    return ExitCode.OK


def cmd_report(out_dir: Path) -> ExitCode:
    """Print the progress table of a campaign directory."""
    print(render_report(load_snapshot(out_dir / STATE_FILE)))
    return ExitCode.OK


# =============================================================================
# Entry point
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    presets = ", ".join(DEFAULT_SCHEDULES)
    parser = argparse.ArgumentParser(
        prog="ipcg-cli",
        description="k-IPCG generation - Command Line Interface",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
  ipcg-cli trees 10                             List the 11 trees with 10 leaves
  ipcg-cli graphs 8 --out graphs8.g6            All 12346 graphs on 8 vertices
  ipcg-cli generate --n 5 --k 1 --time 60       Identify the 5-vertex 1-IPCGs
  ipcg-cli generate --targets graphs8.g6 --schedule eight-vertex-b --threads 4
  ipcg-cli generate --out ipcg-out --resume     Continue an interrupted campaign
  ipcg-cli verify ipcg-out/certificates.jsonl --targets graphs8.g6
  ipcg-cli report ipcg-out

Preset schedules: {presets}
        """,
    )
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trees", help="List binary trees with n leaves as Newick")
    p.add_argument("n", type=int)

    p = sub.add_parser("graphs", help="Write all graphs on n vertices as graph6")
    p.add_argument("n", type=int)
    p.add_argument("--sample", type=int, default=None, help="Random subsample size")
    p.add_argument("--seed", type=int, default=0, help="Subsample seed (default: 0)")
    p.add_argument("--out", type=Path, default=None, help="Output file (default: stdout)")

    p = sub.add_parser("generate", help="Run or resume a generation campaign")
    source = p.add_mutually_exclusive_group()
    source.add_argument("--targets", type=Path, help="graph6 file of target graphs")
    source.add_argument("--n", type=int, help="Use all graphs on n vertices")
    p.add_argument("--k", type=int, default=None, help="Number of intervals (default: 2)")
    p.add_argument("--schedule", default=None, help="Schedule file or preset name")
    p.add_argument("--leaf-range", default=None, help="Pendant weights a1:a2 (default: 1:20)")
    p.add_argument(
        "--internal-range", default=None, help="Internal weights a3:a4 (default: 1:50)"
    )
    p.add_argument("--time", type=float, default=None, help="Time budget in seconds (default: 60)")
    p.add_argument("--rounds", type=int, default=None, help="Round cap for the phase")
    p.add_argument("--trees", default=None, help="Tree subset, e.g. 1-4,9")
    p.add_argument("--seed", type=int, default=0, help="Campaign seed (default: 0)")
    p.add_argument("--threads", type=int, default=1, help="Worker processes (default: 1)")
    p.add_argument("--out", default=None, help=f"Output directory (default: ${OUTPUT_DIR_ENV} "
                   f"or ./{DEFAULT_OUTPUT_DIR})")
    p.add_argument("--resume", action="store_true", help="Continue from state.json in --out")
    p.add_argument(
        "--checkpoint-interval",
        type=float,
        default=DEFAULT_CHECKPOINT_INTERVAL,
        help=f"Seconds between progress rows (default: {DEFAULT_CHECKPOINT_INTERVAL:g})",
    )
    p.add_argument(
        "--interval-rows-only",
        action="store_true",
        help="Add progress rows only every --checkpoint-interval seconds, not after every round",
    )

    p = sub.add_parser("verify", help="Verify a certificate file")
    p.add_argument("certificates", type=Path)
    p.add_argument("--targets", type=Path, default=None, help="graph6 file the targets must match")

    p = sub.add_parser("report", help="Print the progress table of a campaign")
    p.add_argument("out_dir", type=Path, nargs="?", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)

    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        if args.command == "trees":
            return cmd_trees(args.n)
        if args.command == "graphs":
            return cmd_graphs(args.n, args.sample, args.seed, args.out)
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "verify":
            return cmd_verify(args.certificates, args.targets)
        return cmd_report(args.out_dir or default_output_dir())
    except (ValueError, KeyError, OSError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"  Error: {message}")
        return ExitCode.INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
