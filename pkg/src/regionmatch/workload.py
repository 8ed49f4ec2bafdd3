"""Workload generation: synthetic overlap-controlled sets and trace ingestion.

The synthetic generator places equal-length regions uniformly at random on
a segment. Region length follows from the requested overlapping degree
(total region length divided by the space length), which makes the
intersection density directly tunable.

Trace ingestion turns one-position-per-line vehicle records into paired
subscription and update regions centred on each position's x coordinate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import SUBSCRIPTION, UPDATE, RegionSet

log = logging.getLogger(__name__)

DEFAULT_SPACE_LENGTH = 1_000_000.0


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a uniform synthetic workload.

    ``total_regions`` is split evenly into subscriptions and updates.
    Every region gets length alpha * space_length / total_regions, so the
    overlapping degree of the generated instance equals ``alpha`` exactly.
    """

    total_regions: int
    alpha: float
    space_length: float = DEFAULT_SPACE_LENGTH
    seed: int = 0

    def __post_init__(self) -> None:
        if self.total_regions < 2 or self.total_regions % 2:
            raise ValueError(
                f"total_regions must be even and >= 2, got {self.total_regions}"
            )
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.space_length > 0:
            raise ValueError(f"space_length must be positive, got {self.space_length}")

    @property
    def region_length(self) -> float:
        return self.alpha * self.space_length / self.total_regions


def gen_uniform(spec: SyntheticSpec) -> tuple[RegionSet, RegionSet]:
    """Generate the 1-D uniform workload described by ``spec``.

    Lower bounds are drawn independently and uniformly from
    [0, space_length - region_length), so regions always lie inside
    [0, space_length). The PCG64 generator makes the output a pure
    function of the seed, bit-identical across platforms and processes.
    """
    length = spec.region_length
    if length > spec.space_length:
        raise ValueError(
            f"region length {length} exceeds the space length {spec.space_length}; "
            f"lower alpha or raise total_regions"
        )
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    half = spec.total_regions // 2
    sub_lo = rng.uniform(0.0, spec.space_length - length, size=half)
    upd_lo = rng.uniform(0.0, spec.space_length - length, size=half)
    S = RegionSet(SUBSCRIPTION, sub_lo[:, None], (sub_lo + length)[:, None])
    U = RegionSet(UPDATE, upd_lo[:, None], (upd_lo + length)[:, None])
    return S, U


def gen_uniform_dd(spec: SyntheticSpec, dimensions: int) -> tuple[RegionSet, RegionSet]:
    """Uniform workload with independent per-dimension placements.

    Each dimension follows the 1-D law with its own derived seed; d = 1
    reduces to :func:`gen_uniform`.
    """
    if dimensions < 1:
        raise ValueError(f"dimensions must be >= 1, got {dimensions}")
    if dimensions == 1:
        return gen_uniform(spec)
    children = np.random.SeedSequence(spec.seed).spawn(dimensions)
    columns = []
    for child in children:
        length = spec.region_length
        if length > spec.space_length:
            raise ValueError(
                f"region length {length} exceeds the space length {spec.space_length}"
            )
        rng = np.random.Generator(np.random.PCG64(child))
        half = spec.total_regions // 2
        sub_lo = rng.uniform(0.0, spec.space_length - length, size=half)
        upd_lo = rng.uniform(0.0, spec.space_length - length, size=half)
        columns.append((sub_lo, upd_lo, length))
    sub_lowers = np.column_stack([c[0] for c in columns])
    upd_lowers = np.column_stack([c[1] for c in columns])
    lengths = np.array([c[2] for c in columns])
    S = RegionSet(SUBSCRIPTION, sub_lowers, sub_lowers + lengths)
    U = RegionSet(UPDATE, upd_lowers, upd_lowers + lengths)
    return S, U


def measured_alpha(S: RegionSet, U: RegionSet, space_length: float) -> float:
    """Total region length of both sets divided by the space length."""
    if not space_length > 0:
        raise ValueError(f"space length must be positive, got {space_length}")
    total = float(S.lengths().sum()) + float(U.lengths().sum())
    return total / space_length


@dataclass(frozen=True)
class TraceSpec:
    """How to read a position-trace file.

    Records are whitespace-separated numeric fields, one per line, with
    '#' comment lines skipped. ``x_field`` selects the coordinate column
    (0-based). Each accepted record becomes one subscription and one
    update region of width ``region_width`` centred on its x value.
    """

    path: str | Path
    region_width: float = 100.0
    max_records: int | None = None
    x_field: int = 2

    def __post_init__(self) -> None:
        if not self.region_width > 0:
            raise ValueError(f"region_width must be positive, got {self.region_width}")
        if self.max_records is not None and self.max_records < 0:
            raise ValueError(f"max_records cannot be negative, got {self.max_records}")
        if self.x_field < 0:
            raise ValueError(f"x_field cannot be negative, got {self.x_field}")


def load_trace(spec: TraceSpec) -> tuple[RegionSet, RegionSet]:
    """Read a position trace into paired subscription and update sets.

    Malformed lines are skipped with a logged warning carrying the line
    number; the remaining records keep dense ids in file order.
    """
    centers: list[float] = []
    skipped = 0
    with open(spec.path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if spec.max_records is not None and len(centers) >= spec.max_records:
                break
            fields = text.split()
            try:
                centers.append(float(fields[spec.x_field]))
            except (IndexError, ValueError):
                skipped += 1
                log.warning("%s line %d: malformed record skipped", spec.path, line_no)
    if skipped:
        log.warning("%s: skipped %d malformed line(s)", spec.path, skipped)
    if not centers:
        return RegionSet.empty(SUBSCRIPTION), RegionSet.empty(UPDATE)
    x = np.asarray(centers, dtype=np.float64)
    half = spec.region_width / 2.0
    lowers = (x - half)[:, None]
    uppers = (x + half)[:, None]
    return RegionSet(SUBSCRIPTION, lowers, uppers), RegionSet(UPDATE, lowers.copy(), uppers.copy())
