"""Half-open intervals, regions, and the overlap predicates every matcher shares.

Coordinates are double precision floats, so integer coordinates embed
losslessly up to 2**53. All ranges are half-open: [a, t) and [t, b) touch
but do not overlap, and an interval with lower == upper is empty and
overlaps nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SUBSCRIPTION = "subscription"
UPDATE = "update"
ROLES = (SUBSCRIPTION, UPDATE)

ENUMERATE = "enumerate"
COUNT_ONLY = "count"
MODES = (ENUMERATE, COUNT_ONLY)

# Pair codes pack (subscription id, update id) into one int64 so that pair
# sets can be deduplicated, sorted and intersected with plain integer ops.
# Ids must stay below 2**31, which dense per-role indices always do here.
_PAIR_SHIFT = 32
_PAIR_MASK = (1 << _PAIR_SHIFT) - 1


@dataclass(frozen=True, slots=True)
class Interval:
    """Half-open 1-D range [lower, upper).

    lower == upper denotes the empty interval. Both bounds must be finite.
    """

    lower: float
    upper: float

    def __post_init__(self) -> None:
        lo = float(self.lower)
        up = float(self.upper)
        if not (math.isfinite(lo) and math.isfinite(up)):
            raise ValueError(f"interval bounds must be finite, got [{lo}, {up})")
        if lo > up:
            raise ValueError(f"interval lower bound exceeds upper bound: [{lo}, {up})")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def is_empty(self) -> bool:
        return self.lower == self.upper


def intersect_1d(x: Interval, y: Interval) -> bool:
    """Half-open overlap test for two intervals.

    True iff the set intersection of [x.lower, x.upper) and
    [y.lower, y.upper) is non-empty. Touching intervals do not overlap and
    empty intervals overlap nothing.
    """
    return max(x.lower, y.lower) < min(x.upper, y.upper)


def overlap_mask(a_lower, a_upper, b_lower, b_upper) -> np.ndarray:
    """Vectorised half-open overlap predicate over broadcastable bound arrays."""
    return np.maximum(a_lower, b_lower) < np.minimum(a_upper, b_upper)


@dataclass(frozen=True, slots=True)
class Region:
    """An identified axis-parallel d-rectangle with a pub/sub role.

    Ids are dense per role (0..count-1 within each role), which lets
    matchers use plain array indices and bit-set style deduplication.
    """

    id: int
    role: str
    extents: tuple[Interval, ...]

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}, expected one of {ROLES}")
        if self.id < 0:
            raise ValueError(f"region id must be non-negative, got {self.id}")
        extents = tuple(self.extents)
        if not extents:
            raise ValueError("region needs at least one extent")
        object.__setattr__(self, "extents", extents)

    @property
    def dimensions(self) -> int:
        return len(self.extents)


def intersect_dd(a: Region, b: Region) -> bool:
    """True iff the regions' projections overlap on every dimension."""
    if a.dimensions != b.dimensions:
        raise ValueError(
            f"dimension mismatch: {a.dimensions} vs {b.dimensions}"
        )
    return all(intersect_1d(x, y) for x, y in zip(a.extents, b.extents))


@dataclass(frozen=True)
class RegionSet:
    """A role-homogeneous set of regions stored as coordinate arrays.

    Region ids are implicit row indices, so they are dense by construction.
    ``lowers``/``uppers`` have shape (count, d). The arrays are not
    validated here; use :func:`validate_regions` on data of unknown origin.
    """

    role: str
    lowers: np.ndarray
    uppers: np.ndarray

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}, expected one of {ROLES}")
        lo = np.atleast_2d(np.asarray(self.lowers, dtype=np.float64))
        up = np.atleast_2d(np.asarray(self.uppers, dtype=np.float64))
        if lo.shape != up.shape:
            raise ValueError(f"bound arrays disagree in shape: {lo.shape} vs {up.shape}")
        object.__setattr__(self, "lowers", lo)
        object.__setattr__(self, "uppers", up)

    def __len__(self) -> int:
        return self.lowers.shape[0]

    @property
    def dimensions(self) -> int:
        return self.lowers.shape[1]

    def projected(self, dim: int) -> "RegionSet":
        """The 1-D region set obtained by keeping only dimension ``dim``."""
        return RegionSet(self.role, self.lowers[:, dim : dim + 1], self.uppers[:, dim : dim + 1])

    def lengths(self) -> np.ndarray:
        return self.uppers - self.lowers

    def region(self, region_id: int) -> Region:
        extents = tuple(
            Interval(float(lo), float(up))
            for lo, up in zip(self.lowers[region_id], self.uppers[region_id])
        )
        return Region(region_id, self.role, extents)

    def to_regions(self) -> list[Region]:
        return [self.region(i) for i in range(len(self))]

    @classmethod
    def from_regions(cls, regions: Sequence[Region]) -> "RegionSet":
        """Build the array form from Region records.

        The records must share one role and one dimensionality, and their
        ids must form 0..count-1.
        """
        if not regions:
            raise ValueError("cannot infer role or dimensionality from an empty sequence")
        role = regions[0].role
        d = regions[0].dimensions
        ordered: list[Region | None] = [None] * len(regions)
        for r in regions:
            if r.role != role:
                raise ValueError(f"mixed roles: {role!r} and {r.role!r}")
            if r.dimensions != d:
                raise ValueError(f"mixed dimensionality: {d} and {r.dimensions}")
            if not (0 <= r.id < len(regions)) or ordered[r.id] is not None:
                raise ValueError(f"region ids must form 0..{len(regions) - 1}, got duplicate or gap at {r.id}")
            ordered[r.id] = r
        lowers = np.array([[iv.lower for iv in r.extents] for r in ordered])
        uppers = np.array([[iv.upper for iv in r.extents] for r in ordered])
        return cls(role, lowers, uppers)

    @classmethod
    def empty(cls, role: str, dimensions: int = 1) -> "RegionSet":
        return cls(role, np.empty((0, dimensions)), np.empty((0, dimensions)))


def validate_regions(regions: Sequence[Region] | RegionSet) -> list[str]:
    """Report every invariant violation in a region collection.

    Returns an empty list when everything is well formed. Checks bound
    finiteness, bound ordering, dimensional consistency, and (for Region
    records) dense unique ids within each role.
    """
    problems: list[str] = []
    if isinstance(regions, RegionSet):
        lo, up = regions.lowers, regions.uppers
        bad_finite = ~(np.isfinite(lo) & np.isfinite(up))
        for idx in np.flatnonzero(bad_finite.any(axis=1)):
            problems.append(f"region {idx}: non-finite bound")
        bad_order = lo > up
        for idx in np.flatnonzero(bad_order.any(axis=1)):
            problems.append(f"region {idx}: lower bound exceeds upper bound")
        return problems

    d = None
    seen: dict[str, set[int]] = {role: set() for role in ROLES}
    counts: dict[str, int] = {role: 0 for role in ROLES}
    for idx, r in enumerate(regions):
        if d is None:
            d = r.dimensions
        elif r.dimensions != d:
            problems.append(f"region {idx}: dimensionality {r.dimensions} differs from {d}")
        for k, iv in enumerate(r.extents):
            if not (math.isfinite(iv.lower) and math.isfinite(iv.upper)):
                problems.append(f"region {idx}: non-finite bound on dimension {k}")
            elif iv.lower > iv.upper:
                problems.append(f"region {idx}: lower bound exceeds upper bound on dimension {k}")
        if r.id in seen[r.role]:
            problems.append(f"region {idx}: duplicate id {r.id} within role {r.role}")
        seen[r.role].add(r.id)
        counts[r.role] += 1
    for role in ROLES:
        if counts[role] and seen[role] != set(range(counts[role])):
            problems.append(f"role {role}: ids do not form 0..{counts[role] - 1}")
    return problems


def encode_pairs(sub_ids: np.ndarray, upd_ids: np.ndarray) -> np.ndarray:
    """Pack parallel (sub id, upd id) arrays into sortable int64 codes."""
    return (np.asarray(sub_ids, dtype=np.int64) << _PAIR_SHIFT) | np.asarray(
        upd_ids, dtype=np.int64
    )


def decode_pairs(codes: np.ndarray) -> np.ndarray:
    """Unpack int64 pair codes into an (k, 2) array of (sub id, upd id) rows."""
    codes = np.asarray(codes, dtype=np.int64)
    return np.column_stack((codes >> _PAIR_SHIFT, codes & _PAIR_MASK))


@dataclass(frozen=True)
class MatchReport:
    """The result of one matching run.

    In enumerate mode ``pairs`` holds the deduplicated (sub id, upd id)
    rows sorted lexicographically; ``count`` always equals the number of
    distinct overlapping pairs.
    """

    mode: str
    count: int
    pairs: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.count < 0:
            raise ValueError("pair count cannot be negative")
        if self.mode == ENUMERATE:
            if self.pairs is None:
                raise ValueError("enumerate mode requires the pair array")
            if self.count != len(self.pairs):
                raise ValueError("count disagrees with the enumerated pairs")

    @classmethod
    def from_codes(cls, codes: np.ndarray, mode: str = ENUMERATE) -> "MatchReport":
        unique = np.unique(np.asarray(codes, dtype=np.int64))
        if mode == COUNT_ONLY:
            return cls(mode=COUNT_ONLY, count=int(unique.size))
        return cls(mode=ENUMERATE, count=int(unique.size), pairs=decode_pairs(unique))

    @classmethod
    def from_pair_arrays(
        cls, sub_ids: np.ndarray, upd_ids: np.ndarray, mode: str = ENUMERATE
    ) -> "MatchReport":
        return cls.from_codes(encode_pairs(sub_ids, upd_ids), mode)

    @classmethod
    def from_count(cls, count: int) -> "MatchReport":
        return cls(mode=COUNT_ONLY, count=int(count))

    def pair_set(self) -> set[tuple[int, int]]:
        """The pairs as a plain Python set of (sub id, upd id) tuples."""
        if self.pairs is None:
            raise ValueError("count-only report has no enumerated pairs")
        return {(int(s), int(u)) for s, u in self.pairs}

    def same_pairs(self, other: "MatchReport") -> bool:
        """True when both reports enumerate exactly the same pair set."""
        if self.pairs is None or other.pairs is None:
            raise ValueError("pair comparison requires enumerate-mode reports")
        return self.pairs.shape == other.pairs.shape and bool(
            np.array_equal(self.pairs, other.pairs)
        )


def regions_from_intervals(
    role: str, bounds: Iterable[tuple[float, float]]
) -> RegionSet:
    """Convenience constructor for 1-D region sets from (lower, upper) pairs."""
    pairs = list(bounds)
    if not pairs:
        return RegionSet.empty(role)
    lowers = np.array([[lo] for lo, _ in pairs])
    uppers = np.array([[up] for _, up in pairs])
    return RegionSet(role, lowers, uppers)
