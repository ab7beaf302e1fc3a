"""
Generator state, round reports and campaign snapshots.

The state tracks the unidentified targets (partitioned by edge count and
indexed by hash value), the certificates found so far and the campaign
position. Snapshots are JSON files replaced atomically after every round;
certificates live in their own append-only file and are reattached on load.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ipcg_search.core.canon import CanonicalForm, CanonRecord, HashValue, hash_of
from ipcg_search.core.graph import EdgePartition
from ipcg_search.search.certificates import ORIGIN_DIRECT, Certificate

logger = logging.getLogger(__name__)

SNAPSHOT_VERSION = 1


# =============================================================================
# Reports
# =============================================================================

@dataclass(frozen=True)
class RoundReport:
    """
    Outcome of one round.

    Attributes:
        round: Campaign-wide round number (1-based)
        phase: Schedule phase index
        candidates: Distinct candidate graphs that reached matching
        new: Targets identified in this round
        per_tree: New identifications per tree index
        remaining: Unidentified targets after the round
        duration: Wall-clock seconds (not part of equality)
    """

    round: int
    phase: int
    candidates: int
    new: int
    per_tree: dict[int, int]
    remaining: int
    duration: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class CheckpointRow:
    """One line of the campaign progress table."""

    elapsed: float
    rounds: int
    identified: int
    remaining: int
    phase: int

    def to_dict(self) -> dict:
        return asdict(self)


# =============================================================================
# GeneratorState
# =============================================================================

@dataclass
class GeneratorState:
    """
    Mutable campaign state.

    Attributes:
        n: Vertex count of every target
        k: Interval budget
        seed: Campaign seed
        total_targets: Number of distinct targets (isomorphism classes)
        remaining: Unidentified targets grouped by edge count
        found: Certificates produced by the sweep, in discovery order
        trivially_known: Direct certificates for targets with < 3 edges
        rounds_completed: Rounds run across all phases
        elapsed: Campaign wall-clock seconds across all phases
        phase_index: Current schedule phase
        phase_rounds: Rounds run in the current phase
        phase_elapsed: Seconds spent in the current phase
        tree_tallies: Sweep identifications per tree index
        checkpoints: Progress table rows
    """

    n: int
    k: int
    seed: int
    total_targets: int = 0
    remaining: EdgePartition[CanonRecord] = field(default_factory=EdgePartition)
    found: list[Certificate] = field(default_factory=list)
    trivially_known: list[Certificate] = field(default_factory=list)
    rounds_completed: int = 0
    elapsed: float = 0.0
    phase_index: int = 0
    phase_rounds: int = 0
    phase_elapsed: float = 0.0
    tree_tallies: dict[int, int] = field(default_factory=dict)
    checkpoints: list[CheckpointRow] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._by_hash: dict[HashValue, list[CanonRecord]] = {}
        for record in self.remaining:
            self._by_hash.setdefault(record.hash, []).append(record)

    # -------------------------------------------------------------------------
    # Targets
    # -------------------------------------------------------------------------

    def add_target(self, record: CanonRecord) -> None:
        """Register an unidentified target."""
        self.remaining.add(record, record.form.edge_count)
        self._by_hash.setdefault(record.hash, []).append(record)

    def match(self, form: CanonicalForm) -> CanonRecord | None:
        """Remaining target equal to ``form``: hash lookup confirmed by full comparison."""
        for record in self._by_hash.get(hash_of(form), ()):
            if record.form == form:
                return record
        return None

    def record_found(self, record: CanonRecord, certificate: Certificate) -> None:
        """Move a target from remaining to found."""
        if not self.remaining.discard(record, record.form.edge_count):
            raise KeyError(f"Target {record.form} is not remaining")
        bucket = self._by_hash[record.hash]
        bucket.remove(record)
        if not bucket:
            del self._by_hash[record.hash]
        if certificate.origin == ORIGIN_DIRECT:
            self.trivially_known.append(certificate)
        else:
            self.found.append(certificate)
            self.tree_tallies[certificate.tree_index] = (
                self.tree_tallies.get(certificate.tree_index, 0) + 1
            )

    # -------------------------------------------------------------------------
    # Queries
    # -------------------------------------------------------------------------

    @property
    def remaining_count(self) -> int:
        return len(self.remaining)

    @property
    def identified_count(self) -> int:
        """Targets identified by the sweep (trivially-known excluded)."""
        return len(self.found)

    @property
    def remaining_edge_counts(self) -> frozenset[int]:
        return self.remaining.edge_counts

    def remaining_signatures(self) -> frozenset[tuple[int, ...]]:
        """Sorted degree sequences of the remaining targets."""
        return frozenset(record.form.graph.degree_signature for record in self.remaining)

    def remaining_forms(self) -> list[CanonicalForm]:
        """Remaining canonical forms, sorted by (edge count, serialization)."""
        return sorted(
            (record.form for record in self.remaining),
            key=lambda f: (f.edge_count, f.serialize()),
        )

    def check_accounting(self) -> None:
        """
        Verify the target bookkeeping.

        Raises:
            RuntimeError: If remaining, found and trivially-known do not
                exactly cover the targets
        """
        found_forms = [c.target for c in self.found + self.trivially_known]
        if len(set(found_forms)) != len(found_forms):
            raise RuntimeError("A target was identified twice")
        if any(self.match(f) is not None for f in found_forms):
            raise RuntimeError("A target is both identified and remaining")
        total = self.remaining_count + len(found_forms)
        if total != self.total_targets:
            raise RuntimeError(f"Accounting mismatch: {total} != {self.total_targets} targets")

    # -------------------------------------------------------------------------
    # Snapshots
    # -------------------------------------------------------------------------

    def to_snapshot(self, schedule: dict | None = None) -> dict:
        """JSON-ready snapshot (certificates are stored separately)."""
        return {
            "version": SNAPSHOT_VERSION,
            "n": self.n,
            "k": self.k,
            "seed": self.seed,
            "total_targets": self.total_targets,
            "remaining": [f.serialize() for f in self.remaining_forms()],
            "found_count": len(self.found),
            "trivially_known_count": len(self.trivially_known),
            "rounds_completed": self.rounds_completed,
            "elapsed": self.elapsed,
            "phase_index": self.phase_index,
            "phase_rounds": self.phase_rounds,
            "phase_elapsed": self.phase_elapsed,
            "tree_tallies": {str(i): c for i, c in sorted(self.tree_tallies.items())},
            "checkpoints": [row.to_dict() for row in self.checkpoints],
            "schedule": schedule,
        }

    @classmethod
    def from_snapshot(cls, data: dict, certificates: list[Certificate]) -> GeneratorState:
        """
        Rebuild a state from a snapshot and the certificate file contents.

        Args:
            data: Parsed snapshot
            certificates: Records of the certificate file; only the first
                found_count + trivially_known_count are used

        Raises:
            ValueError: If the snapshot version is unknown or the
                certificate file is shorter than the snapshot expects
        """
        if data.get("version") != SNAPSHOT_VERSION:
            raise ValueError(f"Unsupported snapshot version {data.get('version')!r}")
        expected = data["found_count"] + data["trivially_known_count"]
        if len(certificates) < expected:
            raise ValueError(
                f"Certificate file has {len(certificates)} records, snapshot expects {expected}"
            )
        kept = certificates[:expected]
        state = cls(
            n=data["n"],
            k=data["k"],
            seed=data["seed"],
            total_targets=data["total_targets"],
            found=[c for c in kept if c.origin != ORIGIN_DIRECT],
            trivially_known=[c for c in kept if c.origin == ORIGIN_DIRECT],
            rounds_completed=data["rounds_completed"],
            elapsed=data["elapsed"],
            phase_index=data["phase_index"],
            phase_rounds=data["phase_rounds"],
            phase_elapsed=data["phase_elapsed"],
            tree_tallies={int(i): c for i, c in data["tree_tallies"].items()},
            checkpoints=[CheckpointRow(**row) for row in data["checkpoints"]],
        )
        for text in data["remaining"]:
            form = CanonicalForm.deserialize(text)
            state.add_target(CanonRecord(form, hash_of(form)))
        return state


def save_snapshot(filepath: str | Path, snapshot: dict) -> None:
    """Write a snapshot atomically (temporary file, then rename)."""
    path = Path(filepath)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(snapshot, f, indent=1)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)
    logger.debug(f"Saved snapshot to {path}")


def load_snapshot(filepath: str | Path) -> dict:
    """Read a snapshot file."""
    with open(filepath, encoding="utf-8") as f:
        return json.load(f)
