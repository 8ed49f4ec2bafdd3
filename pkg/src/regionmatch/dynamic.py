"""Dynamic region management backed by per-role interval trees.

A session keeps one interval tree per role and dimension, so moving or
resizing a single region costs two logarithmic tree updates per dimension
instead of a full re-match. After an update, the session reports every
current overlap of the modified region exactly once.

Sessions are single-writer: concurrent updates are not supported, but
read-only overlap queries between updates are safe.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .geometry import (
    ENUMERATE,
    SUBSCRIPTION,
    UPDATE,
    ROLES,
    Interval,
    MatchReport,
    RegionSet,
)
from .interval_tree import IntervalTree


class DynSession:
    """Matching state for one subscription set and one update set."""

    def __init__(self, S: RegionSet, U: RegionSet):
        if S.dimensions != U.dimensions:
            raise ValueError(f"dimension mismatch: {S.dimensions} vs {U.dimensions}")
        self.dimensions = S.dimensions
        self._extents: dict[str, list[list[Interval]]] = {
            SUBSCRIPTION: [list(r.extents) for r in S.to_regions()],
            UPDATE: [list(r.extents) for r in U.to_regions()],
        }
        self._trees: dict[str, list[IntervalTree]] = {}
        for role, regions in ((SUBSCRIPTION, S), (UPDATE, U)):
            self._trees[role] = [
                IntervalTree.build(
                    [
                        (Interval(float(lo), float(up)), rid)
                        for rid, (lo, up) in enumerate(
                            zip(regions.lowers[:, dim], regions.uppers[:, dim])
                        )
                    ]
                )
                for dim in range(self.dimensions)
            ]

    def count(self, role: str) -> int:
        return len(self._extents[role])

    def extents_of(self, role: str, region_id: int) -> tuple[Interval, ...]:
        self._check_id(role, region_id)
        return tuple(self._extents[role][region_id])

    def _check_id(self, role: str, region_id: int) -> None:
        if role not in ROLES:
            raise ValueError(f"unknown role {role!r}, expected one of {ROLES}")
        if not 0 <= region_id < len(self._extents[role]):
            raise KeyError(f"no {role} region with id {region_id}")

    def overlaps_of(self, role: str, region_id: int) -> MatchReport:
        """Current overlaps of one region against the opposite role."""
        self._check_id(role, region_id)
        extents = self._extents[role][region_id]
        other_role = UPDATE if role == SUBSCRIPTION else SUBSCRIPTION
        candidates = self._trees[other_role][0].overlapping_ids(extents[0])
        other_extents = self._extents[other_role]
        hits = [
            rid
            for rid in candidates
            if all(
                max(a.lower, b.lower) < min(a.upper, b.upper)
                for a, b in zip(extents[1:], other_extents[rid][1:])
            )
        ]
        hit_arr = np.asarray(sorted(hits), dtype=np.int64)
        own = np.full(hit_arr.shape[0], region_id, dtype=np.int64)
        if role == SUBSCRIPTION:
            return MatchReport.from_pair_arrays(own, hit_arr, ENUMERATE)
        return MatchReport.from_pair_arrays(hit_arr, own, ENUMERATE)

    def update_region(
        self, role: str, region_id: int, new_extents: Sequence[Interval]
    ) -> MatchReport:
        """Move or resize one region and report its current overlaps.

        The region's tree entries are deleted and re-inserted on every
        dimension, so the session stays consistent even for no-op updates.
        """
        self._check_id(role, region_id)
        new_extents = list(new_extents)
        if len(new_extents) != self.dimensions:
            raise ValueError(
                f"expected {self.dimensions} extents, got {len(new_extents)}"
            )
        old = self._extents[role][region_id]
        for dim, (old_iv, new_iv) in enumerate(zip(old, new_extents)):
            tree = self._trees[role][dim]
            tree.delete(old_iv, region_id)
            tree.insert(new_iv, region_id)
        self._extents[role][region_id] = new_extents
        return self.overlaps_of(role, region_id)


def dyn_session_create(S: RegionSet, U: RegionSet) -> DynSession:
    return DynSession(S, U)


def dyn_update_region(
    session: DynSession, role: str, region_id: int, new_extents: Sequence[Interval]
) -> MatchReport:
    return session.update_region(role, region_id, new_extents)
