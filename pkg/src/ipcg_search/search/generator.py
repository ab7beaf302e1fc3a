"""
Randomized k-IPCG generation.

Each round draws one weight vector (leaf edges 1..n, internal edges
n+1..2n-3), applies it to every selected witness tree, sweeps all interval
tuples over each tree's distinct leaf distances, and matches the resulting
graphs against the remaining targets. Per-tree sweeps run in worker
processes when ``threads > 1``; matching always happens in the parent in
tree order, so serial and parallel runs produce the same certificates.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from ipcg_search.core.canon import CanonicalForm, canonical_rows, gen_can
from ipcg_search.core.graph import LabeledGraph, VertexColoring
from ipcg_search.core.graph6 import write_graph6, write_graph6_file
from ipcg_search.search.certificates import (
    Certificate,
    append_certificates,
    direct_certificate,
    read_certificates,
    truncate_certificates,
)
from ipcg_search.search.config import (
    DEFAULT_CHECKPOINT_INTERVAL,
    CampaignConfig,
    Schedule,
    WeightRange,
)
from ipcg_search.search.state import (
    CheckpointRow,
    GeneratorState,
    RoundReport,
    load_snapshot,
    save_snapshot,
)
from ipcg_search.search.sweep import HALF, sample_weights, sweep
from ipcg_search.trees.enumeration import UnrootedBinaryTree, gen_binary_trees
from ipcg_search.trees.newick import to_newick
from ipcg_search.trees.weights import path_cache

logger = logging.getLogger(__name__)

CERTIFICATES_FILE = "certificates.jsonl"
STATE_FILE = "state.json"
REMAINING_FILE = "remaining.g6"
REPORT_FILE = "report.txt"


def round_rng(seed: int, phase: int, round_number: int) -> np.random.Generator:
    """RNG for one round, derived from (seed, phase, round)."""
    return np.random.default_rng([seed, phase, round_number])


# =============================================================================
# Per-tree sweep (runs in worker processes)
# =============================================================================

class SweepHit(NamedTuple):
    """A candidate that passed the degree prefilter, with its canonical rows."""

    indices: tuple[int, ...]
    bounds: tuple[tuple[int, int], ...]
    rows: tuple[int, ...]
    canonical: tuple[int, ...]


class SweepTask(NamedTuple):
    distances: np.ndarray
    n: int
    k: int
    wanted_edge_counts: frozenset[int]
    signatures: frozenset[tuple[int, ...]]


@lru_cache(maxsize=1 << 18)
def _canonical_rows_cached(rows: tuple[int, ...]) -> tuple[int, ...]:
    return canonical_rows(rows)


def sweep_tree(task: SweepTask) -> list[SweepHit]:
    """
    Sweep one tree's distances and canonicalize the candidates.

    Candidates whose sorted degree sequence matches no remaining target are
    dropped before canonicalization.
    """
    hits = []
    values = None
    for candidate in sweep(task.distances, task.n, task.k, task.wanted_edge_counts):
        signature = tuple(sorted(row.bit_count() for row in candidate.rows))
        if signature not in task.signatures:
            continue
        if values is None:
            values = np.unique(task.distances).tolist()
        bounds = tuple(
            (int(values[a - 1]), int(values[b - 1])) for a, b in candidate.interval_tuple.blocks()
        )
        hits.append(
            SweepHit(
                candidate.interval_tuple.indices,
                bounds,
                candidate.rows,
                _canonical_rows_cached(candidate.rows),
            )
        )
    return hits


# =============================================================================
# Rounds
# =============================================================================

def _selected_trees(
    trees: Sequence[UnrootedBinaryTree],
    subset: tuple[int, ...] | None,
) -> list[tuple[int, UnrootedBinaryTree]]:
    if subset is None:
        return list(enumerate(trees, start=1))
    for i in subset:
        if not 1 <= i <= len(trees):
            raise ValueError(f"Tree index {i} outside 1..{len(trees)}")
    return [(i, trees[i - 1]) for i in subset]


def run_round(
    trees: Sequence[UnrootedBinaryTree],
    state: GeneratorState,
    cfg: CampaignConfig,
    rng: np.random.Generator,
    executor: Executor | None = None,
) -> RoundReport:
    """
    Run one round: sample weights, sweep every selected tree, match candidates.

    Args:
        trees: All witness trees for n leaves (tree index i is trees[i - 1])
        state: Generator state, updated in place
        cfg: Configuration of the current phase
        rng: Random generator for this round's weight sample
        executor: Optional pool for the per-tree sweeps

    Returns:
        RoundReport for this round

    Raises:
        RuntimeError: If no targets remain
        ValueError: If the tree subset references a missing tree
    """
    if not state.remaining:
        raise RuntimeError("run_round called with no remaining targets")

    start = time.monotonic()
    n = state.n
    round_number = state.rounds_completed + 1
    selected = _selected_trees(trees, cfg.tree_subset)
    w = sample_weights(rng, n, cfg)
    newick_cache: dict[int, str] = {}

    wanted = state.remaining_edge_counts
    signatures = state.remaining_signatures()
    tasks = [
        SweepTask(path_cache(tree).distances(w), n, cfg.k, wanted, signatures)
        for _, tree in selected
    ]
    results = executor.map(sweep_tree, tasks) if executor is not None else map(sweep_tree, tasks)

    uniform = VertexColoring.uniform(n)
    identity = tuple(range(1, n + 1))
    candidates = 0
    per_tree: dict[int, int] = {}
    for (index, tree), hits in zip(selected, results):
        candidates += len(hits)
        for hit in hits:
            record = state.match(CanonicalForm(LabeledGraph(n, hit.canonical), uniform))
            if record is None:
                continue
            if index not in newick_cache:
                newick_cache[index] = to_newick(tree, w)
            certificate = Certificate(
                target=record.form,
                n=n,
                k=cfg.k,
                tree_index=index,
                newick=newick_cache[index],
                weights=w.weights,
                intervals=tuple(
                    (Fraction(lo) - HALF, Fraction(hi) + HALF) for lo, hi in hit.bounds
                ),
                sigma=identity,
                graph=write_graph6(LabeledGraph(n, hit.rows)),
                leaf_range=cfg.leaf_range,
                internal_range=cfg.internal_range,
                phase=cfg.phase,
                round=round_number,
                seed=cfg.seed,
            )
            state.record_found(record, certificate)
            per_tree[index] = per_tree.get(index, 0) + 1
            if not state.remaining:
                break

    duration = time.monotonic() - start
    state.rounds_completed = round_number
    state.phase_rounds += 1
    state.phase_elapsed += duration
    state.elapsed += duration

    report = RoundReport(
        round=round_number,
        phase=cfg.phase,
        candidates=candidates,
        new=sum(per_tree.values()),
        per_tree=per_tree,
        remaining=state.remaining_count,
        duration=duration,
    )
    logger.info(
        f"Round {round_number} (phase {cfg.phase}): {report.new} new from "
        f"{candidates} candidates, {report.remaining} remaining ({duration:.2f}s)"
    )
    return report


# =============================================================================
# Single-phase generation
# =============================================================================

class GenerationResult(NamedTuple):
    """Output of ``generate``."""

    found: list[Certificate]
    remaining: list[CanonicalForm]
    trivially_known: list[Certificate]


def _common_n(targets: Sequence[LabeledGraph]) -> int:
    if not targets:
        raise ValueError("No targets given")
    sizes = {g.n for g in targets}
    if len(sizes) != 1:
        raise ValueError(f"Targets have mixed vertex counts: {sorted(sizes)}")
    n = sizes.pop()
    if n < 3:
        raise ValueError(f"Targets need at least 3 vertices, got n={n}")
    return n


def prepare_state(
    targets: Iterable[LabeledGraph],
    k: int,
    seed: int,
    leaf_range: WeightRange,
    internal_range: WeightRange,
) -> GeneratorState:
    """
    Canonicalize and deduplicate the targets; identify graphs with < 3 edges directly.

    Raises:
        ValueError: On mixed vertex counts, n < 3 or an empty target set
    """
    graphs = list(targets)
    n = _common_n(graphs)
    state = GeneratorState(n=n, k=k, seed=seed)

    seen: set[CanonicalForm] = set()
    for record in gen_can(graphs):
        if record.form in seen:
            continue
        seen.add(record.form)
        state.add_target(record)
    state.total_targets = len(seen)
    if len(graphs) != len(seen):
        logger.info(f"Dropped {len(graphs) - len(seen)} isomorphic duplicate target(s)")

    small = [r for r in state.remaining if r.form.edge_count < 3]
    for record in sorted(small, key=lambda r: (r.form.edge_count, r.form.serialize())):
        cert = direct_certificate(record.form, k, leaf_range, internal_range, seed)
        state.record_found(record, cert)
    logger.info(
        f"{state.total_targets} targets on {n} vertices, "
        f"{len(state.trivially_known)} trivially known"
    )
    return state


def _check_trees(trees: Sequence[UnrootedBinaryTree], n: int) -> None:
    if not trees:
        raise ValueError("No witness trees given")
    for i, tree in enumerate(trees, start=1):
        if tree.n != n:
            raise ValueError(f"Tree {i} has {tree.n} leaves, targets have {n} vertices")
        if not tree.is_indexed:
            raise ValueError(f"Tree {i} has no edge indices")


def _phase_open(state: GeneratorState, cfg: CampaignConfig) -> bool:
    if not state.remaining:
        return False
    if cfg.max_rounds is not None and state.phase_rounds >= cfg.max_rounds:
        return False
    return state.phase_elapsed < cfg.time_budget


def generate(
    targets: Iterable[LabeledGraph],
    trees: Sequence[UnrootedBinaryTree] | None,
    cfg: CampaignConfig,
    on_round: Callable[[RoundReport], None] | None = None,
) -> GenerationResult:
    """
    Run rounds until every target is identified or the budget is exhausted.

    Args:
        targets: Graphs with a common vertex count n >= 3
        trees: Witness trees with n leaves; None for gen_binary_trees(n)
        cfg: Campaign configuration (time budget, optional round cap)
        on_round: Callback invoked with each RoundReport

    Returns:
        GenerationResult with sweep certificates, the unidentified canonical
        forms, and direct certificates for targets with < 3 edges

    Raises:
        ValueError: On mixed vertex counts, n < 3, or trees of the wrong size

    Example:
        >>> cfg = CampaignConfig(k=2, leaf_range=WeightRange(1, 20),
        ...                      internal_range=WeightRange(1, 50), time_budget=60)
        >>> result = generate(enumerate_graphs(5), None, cfg)
        >>> result.remaining
        []
    """
    state = prepare_state(targets, cfg.k, cfg.seed, cfg.leaf_range, cfg.internal_range)
    family = list(trees) if trees is not None else gen_binary_trees(state.n)
    _check_trees(family, state.n)

    pool = ProcessPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
    try:
        while _phase_open(state, cfg):
            rng = round_rng(cfg.seed, cfg.phase, state.rounds_completed + 1)
            report = run_round(family, state, cfg, rng, pool)
            if on_round is not None:
                on_round(report)
    finally:
        if pool is not None:
            pool.shutdown()

    return GenerationResult(list(state.found), state.remaining_forms(), list(state.trivially_known))


# =============================================================================
# Multi-phase campaign with artifacts and resume
# =============================================================================

@dataclass
class Campaign:
    """
    Multi-phase campaign writing certificates, snapshots and a remaining file.

    Artifacts in ``out_dir``: certificates.jsonl (append-only), state.json
    (replaced after every round), remaining.g6 (written at phase ends).

    Attributes:
        schedule: Phases to run
        k: Interval budget
        seed: Campaign seed
        out_dir: Output directory
        threads: Worker processes for per-tree sweeps
        checkpoint_interval: Seconds between progress rows when round_rows is off
        round_rows: Add a progress row after every round

    Example:
        >>> with create_campaign(graphs, get_default_schedule("eight-vertex-b"),
        ...                      k=2, out_dir="runs/n8") as campaign:
        ...     state = campaign.run()
        >>> state.remaining_count
        0
    """

    schedule: Schedule
    k: int
    out_dir: Path
    seed: int = 0
    threads: int = 1
    checkpoint_interval: float = DEFAULT_CHECKPOINT_INTERVAL
    round_rows: bool = True
    state: GeneratorState | None = None
    trees: list[UnrootedBinaryTree] = field(default_factory=list, repr=False)
    _pool: ProcessPoolExecutor | None = field(default=None, repr=False)
    _last_checkpoint: float = field(default=0.0, repr=False)

    def __post_init__(self) -> None:
        self.out_dir = Path(self.out_dir)
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.checkpoint_interval < 0:
            raise ValueError(f"checkpoint_interval cannot be negative: {self.checkpoint_interval}")

    # -------------------------------------------------------------------------
    # Paths
    # -------------------------------------------------------------------------

    @property
    def certificates_path(self) -> Path:
        return self.out_dir / CERTIFICATES_FILE

    @property
    def state_path(self) -> Path:
        return self.out_dir / STATE_FILE

    @property
    def remaining_path(self) -> Path:
        return self.out_dir / REMAINING_FILE

    # =========================================================================
    # Setup
    # =========================================================================

    def start(self, targets: Iterable[LabeledGraph]) -> GeneratorState:
        """
        Begin a fresh campaign; existing artifacts in out_dir are replaced.

        Raises:
            ValueError: On invalid targets
        """
        self.out_dir.mkdir(parents=True, exist_ok=True)
        first = self.schedule[0]
        self.state = prepare_state(targets, self.k, self.seed, first.leaf_range, first.internal_range)
        if self.certificates_path.exists():
            logger.warning(f"Replacing existing {self.certificates_path}")
        self.certificates_path.write_text("", encoding="utf-8")
        append_certificates(self.certificates_path, self.state.trivially_known)
        self._prepare_trees()
        self.state.checkpoints.append(self._row())
        self._save()
        return self.state

    def resume(self) -> GeneratorState:
        """
        Continue from the snapshot in out_dir.

        Certificates appended after the snapshot was written are discarded,
        so the resumed run repeats those rounds exactly.

        Raises:
            FileNotFoundError: If no snapshot exists
            ValueError: If the snapshot does not match k or the certificates
        """
        data = load_snapshot(self.state_path)
        if data["k"] != self.k:
            raise ValueError(f"Snapshot was taken with k={data['k']}, campaign uses k={self.k}")
        self.seed = data["seed"]
        keep = data["found_count"] + data["trivially_known_count"]
        dropped = truncate_certificates(self.certificates_path, keep)
        if dropped:
            logger.warning(f"Dropped {dropped} certificate(s) written after the last snapshot")
        certificates = read_certificates(self.certificates_path) if keep else []
        self.state = GeneratorState.from_snapshot(data, certificates)
        self._prepare_trees()
        logger.info(
            f"Resumed at phase {self.state.phase_index}, round {self.state.rounds_completed}, "
            f"{self.state.remaining_count} remaining"
        )
        return self.state

    def _prepare_trees(self) -> None:
        assert self.state is not None
        if not self.trees:
            self.trees = gen_binary_trees(self.state.n)
        _check_trees(self.trees, self.state.n)
        for phase in self.schedule:
            _selected_trees(self.trees, phase.trees)

    # =========================================================================
    # Execution
    # =========================================================================

    @property
    def complete(self) -> bool:
        """True when no target remains."""
        return self.state is not None and not self.state.remaining

    def run(self, on_round: Callable[[RoundReport], None] | None = None) -> GeneratorState:
        """
        Run the remaining phases of the schedule.

        Returns:
            The final GeneratorState

        Raises:
            RuntimeError: If neither start() nor resume() was called
        """
        if self.state is None:
            raise RuntimeError("Campaign has no state; call start() or resume() first")
        state = self.state
        if self.threads > 1 and self._pool is None:
            self._pool = ProcessPoolExecutor(max_workers=self.threads)

        self._last_checkpoint = state.elapsed
        while state.phase_index < len(self.schedule) and state.remaining:
            cfg = CampaignConfig.from_phase(
                self.schedule[state.phase_index], self.k, self.seed, state.phase_index, self.threads
            )
            logger.info(
                f"Phase {cfg.phase}: leaf {cfg.leaf_range}, internal {cfg.internal_range}, "
                f"{cfg.time_budget:g}s, trees {cfg.tree_subset or 'all'}"
            )
            while _phase_open(state, cfg):
                found_before = len(state.found)
                rng = round_rng(self.seed, cfg.phase, state.rounds_completed + 1)
                report = run_round(self.trees, state, cfg, rng, self._pool)
                append_certificates(self.certificates_path, state.found[found_before:])
                if (
                    self.round_rows
                    or state.elapsed - self._last_checkpoint >= self.checkpoint_interval
                    or not state.remaining
                ):
                    self._checkpoint()
                self._save()
                if on_round is not None:
                    on_round(report)

            self._checkpoint()
            state.phase_index += 1
            state.phase_rounds = 0
            state.phase_elapsed = 0.0
            self._save()
            self._write_remaining()

        state.check_accounting()
        self._write_remaining()
        return state

    def _row(self) -> CheckpointRow:
        assert self.state is not None
        s = self.state
        return CheckpointRow(
            elapsed=round(s.elapsed, 3),
            rounds=s.rounds_completed,
            identified=s.identified_count,
            remaining=s.remaining_count,
            phase=s.phase_index,
        )

    def _checkpoint(self) -> None:
        assert self.state is not None
        row = self._row()
        rows = self.state.checkpoints
        if rows and (rows[-1].rounds, rows[-1].phase) == (row.rounds, row.phase):
            return
        rows.append(row)
        self._last_checkpoint = self.state.elapsed

    def _save(self) -> None:
        assert self.state is not None
        save_snapshot(self.state_path, self.state.to_snapshot(self.schedule.to_dict()))

    def _write_remaining(self) -> None:
        assert self.state is not None
        forms = self.state.remaining_forms()
        write_graph6_file(self.remaining_path, (f.graph for f in forms))

    # =========================================================================
    # Context Manager
    # =========================================================================

    def __enter__(self) -> Campaign:
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None


# =============================================================================
# Factory function
# =============================================================================

def create_campaign(
    targets: Iterable[LabeledGraph] | None,
    schedule: Schedule,
    k: int,
    out_dir: str | Path,
    seed: int = 0,
    threads: int = 1,
    checkpoint_interval: float = DEFAULT_CHECKPOINT_INTERVAL,
    round_rows: bool = True,
    resume: bool = False,
) -> Campaign:
    """
    Create a campaign and either start it on ``targets`` or resume it from out_dir.

    Args:
        targets: Target graphs (ignored when resuming)
        schedule: Phases to run
        k: Interval budget
        out_dir: Artifact directory
        seed: Campaign seed (a resumed campaign keeps its recorded seed)
        threads: Worker processes
        checkpoint_interval: Seconds between progress rows
        round_rows: Also add a row after every round
        resume: Continue from state.json in out_dir

    Returns:
        Campaign ready to run()
    """
    campaign = Campaign(
        schedule=schedule,
        k=k,
        out_dir=Path(out_dir),
        seed=seed,
        threads=threads,
        checkpoint_interval=checkpoint_interval,
        round_rows=round_rows,
    )
    if resume:
        campaign.resume()
    else:
        if targets is None:
            raise ValueError("Targets are required unless resuming")
        campaign.start(targets)
    return campaign
