"""
Campaign configuration: weight ranges, phases and schedules.

A campaign runs one or more phases. Each phase fixes the leaf and internal
weight ranges, a time budget and optionally a subset of the witness trees.
Schedules are stored as plain text, one phase per line:

    leaf=1:20 internal=1:50 time=3600 trees=1,2,3,4
    leaf=1:40 internal=1:70 time=3600

Optional keys: ``trees`` (1-based tree indices, default all) and ``rounds``
(round cap, for bounded runs). Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

logger = logging.getLogger(__name__)

DEFAULT_CHECKPOINT_INTERVAL = 60.0


# =============================================================================
# Weight ranges and phases
# =============================================================================

@dataclass(frozen=True)
class WeightRange:
    """
    Closed integer range [low, high] for sampled edge weights.

    Example:
        >>> WeightRange.parse("1:20")
        WeightRange(low=1, high=20)
    """

    low: int
    high: int

    def __post_init__(self) -> None:
        if self.low < 1:
            raise ValueError(f"Weight range lower bound must be >= 1, got {self.low}")
        if self.high < self.low:
            raise ValueError(f"Weight range [{self.low}, {self.high}] is empty")

    @classmethod
    def parse(cls, text: str) -> WeightRange:
        """Parse ``a:b`` (``a,b`` is accepted too)."""
        parts = text.replace(",", ":").split(":")
        if len(parts) != 2:
            raise ValueError(f"Weight range must look like 'a:b', got {text!r}")
        try:
            return cls(int(parts[0]), int(parts[1]))
        except ValueError as e:
            raise ValueError(f"Invalid weight range {text!r}: {e}") from e

    def __contains__(self, value: object) -> bool:
        return isinstance(value, int) and self.low <= value <= self.high

    def __str__(self) -> str:
        return f"{self.low}:{self.high}"

    def as_list(self) -> list[int]:
        return [self.low, self.high]


@dataclass(frozen=True)
class Phase:
    """
    One stage of a campaign schedule.

    Attributes:
        leaf_range: Range [a1, a2] for pendant-edge weights
        internal_range: Range [a3, a4] for internal-edge weights
        time_budget: Wall-clock budget in seconds (> 0)
        trees: 1-based indices of the witness trees to use; None for all
        max_rounds: Optional cap on rounds (the phase ends at whichever
            limit is hit first)
    """

    leaf_range: WeightRange
    internal_range: WeightRange
    time_budget: float
    trees: tuple[int, ...] | None = None
    max_rounds: int | None = None

    def __post_init__(self) -> None:
        if self.time_budget <= 0:
            raise ValueError(f"Time budget must be positive, got {self.time_budget}")
        if self.trees is not None:
            if not self.trees:
                raise ValueError("Tree subset cannot be empty")
            if any(i < 1 for i in self.trees):
                raise ValueError(f"Tree indices are 1-based, got {self.trees}")
            if len(set(self.trees)) != len(self.trees):
                raise ValueError(f"Duplicate tree index in {self.trees}")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")

    @classmethod
    def from_line(cls, line: str) -> Phase:
        """
        Parse one schedule line.

        Raises:
            ValueError: On unknown or missing keys and invalid values
        """
        values: dict[str, str] = {}
        for token in line.split():
            key, sep, value = token.partition("=")
            if not sep or not value:
                raise ValueError(f"Schedule token must be key=value, got {token!r}")
            if key not in ("leaf", "internal", "time", "trees", "rounds"):
                raise ValueError(f"Unknown schedule key {key!r}")
            values[key] = value

        missing = [k for k in ("leaf", "internal", "time") if k not in values]
        if missing:
            raise ValueError(f"Schedule line is missing {', '.join(missing)}: {line!r}")

        trees = None
        if "trees" in values:
            trees = parse_tree_list(values["trees"])
        return cls(
            leaf_range=WeightRange.parse(values["leaf"]),
            internal_range=WeightRange.parse(values["internal"]),
            time_budget=float(values["time"]),
            trees=trees,
            max_rounds=int(values["rounds"]) if "rounds" in values else None,
        )

    def to_line(self) -> str:
        """Inverse of ``from_line``."""
        parts = [
            f"leaf={self.leaf_range}",
            f"internal={self.internal_range}",
            f"time={self.time_budget:g}",
        ]
        if self.trees is not None:
            parts.append("trees=" + ",".join(str(i) for i in self.trees))
        if self.max_rounds is not None:
            parts.append(f"rounds={self.max_rounds}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {
            "leaf_range": self.leaf_range.as_list(),
            "internal_range": self.internal_range.as_list(),
            "time_budget": self.time_budget,
            "trees": list(self.trees) if self.trees is not None else None,
            "max_rounds": self.max_rounds,
        }

    @classmethod
    def from_dict(cls, data: dict) -> Phase:
        return cls(
            leaf_range=WeightRange(*data["leaf_range"]),
            internal_range=WeightRange(*data["internal_range"]),
            time_budget=float(data["time_budget"]),
            trees=tuple(data["trees"]) if data.get("trees") is not None else None,
            max_rounds=data.get("max_rounds"),
        )


def parse_tree_list(text: str) -> tuple[int, ...]:
    """
    Parse a tree subset such as ``1,2,5`` or ``1-4,9``.

    Raises:
        ValueError: If an entry is not a positive integer or range
    """
    indices: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            if sep:
                indices.extend(range(int(lo), int(hi) + 1))
            else:
                indices.append(int(part))
        except ValueError:
            raise ValueError(f"Invalid tree index {part!r} in {text!r}") from None
    if not indices:
        raise ValueError(f"Empty tree list {text!r}")
    return tuple(indices)


# =============================================================================
# Schedule
# =============================================================================

@dataclass
class Schedule:
    """
    Ordered list of campaign phases.

    Attributes:
        phases: Phases run in order; each resumes from the state left by
            the previous one
        name: Label used in logs and reports
    """

    phases: list[Phase] = field(default_factory=list)
    name: str = "custom"

    def __post_init__(self) -> None:
        if not self.phases:
            raise ValueError("A schedule needs at least one phase")

    def __len__(self) -> int:
        return len(self.phases)

    def __iter__(self):
        return iter(self.phases)

    def __getitem__(self, index: int) -> Phase:
        return self.phases[index]

    @property
    def total_time(self) -> float:
        """Sum of phase budgets in seconds."""
        return sum(p.time_budget for p in self.phases)

    @classmethod
    def single(
        cls,
        leaf_range: WeightRange,
        internal_range: WeightRange,
        time_budget: float,
        trees: tuple[int, ...] | None = None,
        max_rounds: int | None = None,
    ) -> Schedule:
        """One-phase schedule built from command-line style values."""
        return cls([Phase(leaf_range, internal_range, time_budget, trees, max_rounds)])

    @classmethod
    def from_lines(cls, lines: Iterable[str], name: str = "custom") -> Schedule:
        """
        Parse schedule text.

        Raises:
            ValueError: If a line is invalid (message carries the line number)
        """
        phases = []
        for lineno, line in enumerate(lines, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                phases.append(Phase.from_line(line))
            except ValueError as e:
                raise ValueError(f"Schedule line {lineno}: {e}") from e
        return cls(phases, name)

    @classmethod
    def from_file(cls, filepath: str | Path) -> Schedule:
        """Load a schedule file."""
        path = Path(filepath)
        with open(path, encoding="utf-8") as f:
            schedule = cls.from_lines(f, name=path.stem)
        logger.info(f"Loaded schedule '{schedule.name}' with {len(schedule)} phase(s)")
        return schedule

    def to_file(self, filepath: str | Path) -> None:
        """Write the schedule in the text format read by ``from_file``."""
        with open(filepath, "w", encoding="utf-8") as f:
            f.write(f"# schedule: {self.name}\n")
            for phase in self.phases:
                f.write(phase.to_line() + "\n")

    def to_dict(self) -> dict:
        return {"name": self.name, "phases": [p.to_dict() for p in self.phases]}

    @classmethod
    def from_dict(cls, data: dict) -> Schedule:
        return cls([Phase.from_dict(p) for p in data["phases"]], data.get("name", "custom"))


# =============================================================================
# Per-phase campaign configuration
# =============================================================================

@dataclass(frozen=True)
class CampaignConfig:
    """
    Parameters of one generator run.

    Attributes:
        k: Number of intervals (>= 1)
        leaf_range: Range [a1, a2] for pendant-edge weights
        internal_range: Range [a3, a4] for internal-edge weights
        time_budget: Wall-clock budget tau in seconds
        seed: Campaign RNG seed
        tree_subset: 1-based tree indices; None for all
        max_rounds: Optional round cap
        phase: Index of the schedule phase this config belongs to
        threads: Worker processes for per-tree sweeps (1 runs in-process)
    """

    k: int
    leaf_range: WeightRange
    internal_range: WeightRange
    time_budget: float
    seed: int = 0
    tree_subset: tuple[int, ...] | None = None
    max_rounds: int | None = None
    phase: int = 0
    threads: int = 1

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.time_budget <= 0:
            raise ValueError(f"Time budget must be positive, got {self.time_budget}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if self.seed < 0:
            raise ValueError(f"Seed must be non-negative, got {self.seed}")

    @classmethod
    def from_phase(
        cls,
        phase: Phase,
        k: int,
        seed: int,
        index: int = 0,
        threads: int = 1,
    ) -> CampaignConfig:
        """Config for schedule phase ``index``."""
        return cls(
            k=k,
            leaf_range=phase.leaf_range,
            internal_range=phase.internal_range,
            time_budget=phase.time_budget,
            seed=seed,
            tree_subset=phase.trees,
            max_rounds=phase.max_rounds,
            phase=index,
            threads=threads,
        )


# =============================================================================
# Preset schedules
# =============================================================================

def _phase(a2: int, a4: int, hours: float, trees: tuple[int, ...] | None = None) -> Phase:
    return Phase(WeightRange(1, a2), WeightRange(1, a4), hours * 3600.0, trees)


EIGHT_VERTEX_A = Schedule([_phase(20, 50, 0.25)], name="eight-vertex-a")
EIGHT_VERTEX_B = Schedule([_phase(50, 100, 0.25)], name="eight-vertex-b")

NINE_VERTEX_A = Schedule([_phase(20, 50, 15.0)], name="nine-vertex-a")
NINE_VERTEX_B = Schedule([_phase(50, 100, 10.0)], name="nine-vertex-b")

_TEN_VERTEX_GROUPS = ((1, 2, 3, 4), (5, 6, 7, 8), (9, 10, 11))

TEN_VERTEX_APPENDIX = Schedule(
    [_phase(20, 50, 10.0, group) for group in _TEN_VERTEX_GROUPS]
    + [_phase(40, 70, 10.0, group) for group in _TEN_VERTEX_GROUPS]
    + [
        _phase(a2, a2 + 30, 5.0)
        for a2 in (70, 90, 110, 130, 150, 170, 190, 210, 230, 250, 270, 290, 310, 330)
    ]
    + [
        _phase(a2, a4, 5.0)
        for a2, a4 in (
            (370, 400), (390, 420), (410, 440), (450, 480), (470, 500), (500, 530),
            (530, 570), (550, 590), (450, 600), (470, 620), (490, 640), (600, 700),
            (650, 750),
        )
    ],
    name="ten-vertex-appendix",
)

DEFAULT_SCHEDULES: dict[str, Schedule] = {
    s.name: s
    for s in (EIGHT_VERTEX_A, EIGHT_VERTEX_B, NINE_VERTEX_A, NINE_VERTEX_B, TEN_VERTEX_APPENDIX)
}


def get_default_schedule(name: str) -> Schedule:
    """
    Get a preset schedule by name.

    Args:
        name: One of the keys of DEFAULT_SCHEDULES

    Returns:
        The preset Schedule

    Raises:
        KeyError: If no preset with that name exists
    """
    if name not in DEFAULT_SCHEDULES:
        available = ", ".join(DEFAULT_SCHEDULES.keys())
        raise KeyError(f"No preset schedule '{name}'. Available: {available}")
    return DEFAULT_SCHEDULES[name]
