"""Parallel sort-based matching: segmented sweep plus prefix-combined active sets.

The sweep works on the sorted array of all region endpoints. Splitting that
array into per-worker segments breaks the sweep's loop-carried state (the
active subscription and update sets), so each worker first scans only its
own segment and records four delta sets: the regions it opened but did not
close (``add``) and the regions it closed without having opened (``del``).
A serial prefix pass then combines the deltas into the exact active sets
each segment would have inherited from a sequential sweep, after which the
final per-segment scans can run independently and report every overlapping
pair exactly once.

Endpoint ordering is the correctness linchpin under half-open semantics:
endpoints sort by (coordinate, kind, role, id) with upper bounds before
lower bounds at equal coordinates, so a region ending at t is deactivated
before one starting at t is activated and touching regions never pair.

Three fork-join phases, no shared mutable state, no locks: parallel segment
scans, a serial combine by the coordinator, then parallel final scans into
private buffers concatenated in segment order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import MatcherConfig
from .geometry import COUNT_ONLY, ENUMERATE, MatchReport, RegionSet
from .parallel import fork_join

# Endpoint kinds. Upper bounds sort before lower bounds at equal
# coordinates, which is what makes touching half-open intervals disjoint.
KIND_UPPER = 0
KIND_LOWER = 1

ROLE_SUB = 0
ROLE_UPD = 1

_PARALLEL_SORT_MIN = 1 << 15


def _require_1d(S: RegionSet, U: RegionSet) -> None:
    if S.dimensions != 1 or U.dimensions != 1:
        raise ValueError(
            f"sweep matching needs 1-D region sets, got d={S.dimensions} and d={U.dimensions}"
        )


@dataclass(frozen=True)
class EndpointArray:
    """Flat endpoint records: coordinate, bound kind, role and region id.

    Freshly built arrays are laid out in (kind, role, id) rank order, so a
    stable sort on the coordinate alone realises the full tie-broken total
    order.
    """

    coord: np.ndarray
    kind: np.ndarray
    role: np.ndarray
    rid: np.ndarray

    def __len__(self) -> int:
        return self.coord.shape[0]

    def slice(self, start: int, stop: int) -> "EndpointArray":
        return EndpointArray(
            self.coord[start:stop],
            self.kind[start:stop],
            self.role[start:stop],
            self.rid[start:stop],
        )

    def take(self, selector: np.ndarray) -> "EndpointArray":
        return EndpointArray(
            self.coord[selector],
            self.kind[selector],
            self.role[selector],
            self.rid[selector],
        )

    def sort_key_rows(self) -> list[tuple[float, int, int, int]]:
        """(coordinate, kind, role, id) rows, mainly for tests and demos."""
        return list(
            zip(
                self.coord.tolist(),
                self.kind.tolist(),
                self.role.tolist(),
                self.rid.tolist(),
            )
        )


@dataclass(frozen=True)
class SegmentDeltas:
    """Per-segment active-set deltas.

    ``sub_add``/``upd_add`` hold the regions whose lower endpoint lies in
    the segment but whose upper endpoint does not; ``sub_del``/``upd_del``
    hold the regions whose upper endpoint lies in the segment but whose
    lower endpoint does not. Add and del sets of one role never intersect.
    """

    sub_add: frozenset[int]
    sub_del: frozenset[int]
    upd_add: frozenset[int]
    upd_del: frozenset[int]


@dataclass(frozen=True)
class ActiveSets:
    """Active region sets at each segment start, one entry per segment."""

    sub_active: tuple[frozenset[int], ...]
    upd_active: tuple[frozenset[int], ...]


def build_endpoints(S: RegionSet, U: RegionSet, workers: int = 1) -> EndpointArray:
    """Both endpoints of every region, pre-ordered by tie rank.

    The layout is all upper bounds (subscriptions then updates, ids
    ascending) followed by all lower bounds in the same role/id order.
    """
    _require_1d(S, U)
    n, m = len(S), len(U)
    coord = np.concatenate(
        [S.uppers[:, 0], U.uppers[:, 0], S.lowers[:, 0], U.lowers[:, 0]]
    )
    kind = np.concatenate(
        [
            np.full(n + m, KIND_UPPER, dtype=np.uint8),
            np.full(n + m, KIND_LOWER, dtype=np.uint8),
        ]
    )
    role_block = np.concatenate(
        [np.full(n, ROLE_SUB, dtype=np.uint8), np.full(m, ROLE_UPD, dtype=np.uint8)]
    )
    role = np.concatenate([role_block, role_block])
    rid_block = np.concatenate([np.arange(n, dtype=np.int64), np.arange(m, dtype=np.int64)])
    rid = np.concatenate([rid_block, rid_block])
    return EndpointArray(coord, kind, role, rid)


def _drop_empty_regions(ep: EndpointArray, S: RegionSet, U: RegionSet) -> EndpointArray:
    """Remove both endpoints of zero-length regions.

    Empty intervals overlap nothing, and the sweep's tie rule assumes every
    region's lower endpoint precedes its upper endpoint, which fails exactly
    for zero-length regions. Dropping them preserves the pair set.
    """
    sub_ok = S.uppers[:, 0] > S.lowers[:, 0]
    upd_ok = U.uppers[:, 0] > U.lowers[:, 0]
    keep = np.empty(len(ep), dtype=bool)
    sub_mask = ep.role == ROLE_SUB
    keep[sub_mask] = sub_ok[ep.rid[sub_mask]]
    keep[~sub_mask] = upd_ok[ep.rid[~sub_mask]]
    if keep.all():
        return ep
    return ep.take(keep)


def _stable_argsort_by_coord(coord: np.ndarray, workers: int) -> np.ndarray:
    """Stable coordinate argsort, chunked across workers and merged.

    Chunk-local stable sorts followed by pairwise stable merges give the
    same permutation a single stable sort would, for every worker count.
    """
    n = coord.shape[0]
    if workers <= 1 or n < _PARALLEL_SORT_MIN:
        return np.argsort(coord, kind="stable")

    bounds = segment_bounds(n, workers)

    def local(ab: tuple[int, int]) -> np.ndarray:
        a, b = ab
        return np.argsort(coord[a:b], kind="stable") + a

    runs = [r for r in fork_join(local, bounds, workers) if r.size]

    def merge(pair: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
        earlier, later = pair
        ca, cb = coord[earlier], coord[later]
        out = np.empty(earlier.size + later.size, dtype=np.int64)
        # earlier-run entries go before equal later-run entries
        out[np.searchsorted(cb, ca, side="left") + np.arange(ca.size)] = earlier
        out[np.searchsorted(ca, cb, side="right") + np.arange(cb.size)] = later
        return out

    while len(runs) > 1:
        pairs = [(runs[i], runs[i + 1]) for i in range(0, len(runs) - 1, 2)]
        merged = fork_join(merge, pairs, workers)
        if len(runs) % 2:
            merged.append(runs[-1])
        runs = merged
    return runs[0] if runs else np.empty(0, dtype=np.int64)


def sort_endpoints(ep: EndpointArray, workers: int = 1) -> EndpointArray:
    """Sort endpoints into the tie-broken total order.

    The order is (coordinate, kind, role, id) with upper bounds first among
    equal coordinates. The outcome is identical for every worker count.
    """
    perm = _stable_argsort_by_coord(ep.coord, workers)
    return ep.take(perm)


def segment_bounds(n_items: int, segments: int) -> list[tuple[int, int]]:
    """Split ``n_items`` positions into contiguous segments of size +/- 1.

    More segments than items yields trailing empty segments, which every
    consumer tolerates.
    """
    if segments < 1:
        raise ValueError(f"need at least one segment, got {segments}")
    offsets = [(p * n_items) // segments for p in range(segments + 1)]
    return [(offsets[p], offsets[p + 1]) for p in range(segments)]


def segment_scan(segment: EndpointArray) -> SegmentDeltas:
    """Compute the add/del delta sets for one contiguous endpoint segment."""
    sub = segment.role == ROLE_SUB
    lower = segment.kind == KIND_LOWER
    sub_lo = segment.rid[sub & lower]
    sub_up = segment.rid[sub & ~lower]
    upd_lo = segment.rid[~sub & lower]
    upd_up = segment.rid[~sub & ~lower]
    return SegmentDeltas(
        sub_add=frozenset(np.setdiff1d(sub_lo, sub_up).tolist()),
        sub_del=frozenset(np.setdiff1d(sub_up, sub_lo).tolist()),
        upd_add=frozenset(np.setdiff1d(upd_lo, upd_up).tolist()),
        upd_del=frozenset(np.setdiff1d(upd_up, upd_lo).tolist()),
    )


def prefix_combine(deltas: Sequence[SegmentDeltas]) -> ActiveSets:
    """Serial prefix pass turning per-segment deltas into starting active sets.

    Segment 0 starts empty; segment p starts from segment p-1's start plus
    its adds minus its dels. The union happens before the difference, which
    is safe because one region never sits in both sets of a segment.
    """
    sub: frozenset[int] = frozenset()
    upd: frozenset[int] = frozenset()
    sub_states = [sub]
    upd_states = [upd]
    for d in deltas[:-1]:
        sub = (sub | d.sub_add) - d.sub_del
        upd = (upd | d.upd_add) - d.upd_del
        sub_states.append(sub)
        upd_states.append(upd)
    if not deltas:
        sub_states, upd_states = [], []
    return ActiveSets(tuple(sub_states), tuple(upd_states))


def final_scan(
    segment: EndpointArray,
    sub_active: Iterable[int],
    upd_active: Iterable[int],
    sink: Callable[[int, int], None],
) -> None:
    """Sweep one segment, reporting pairs through ``sink(sub_id, upd_id)``.

    Given the active sets a sequential sweep would hold when entering the
    segment, this emits exactly the pairs the sequential sweep reports
    while traversing it: every upper endpoint reports its region against
    all active regions of the opposite role.
    """
    sub = set(sub_active)
    upd = set(upd_active)
    kinds = segment.kind.tolist()
    roles = segment.role.tolist()
    rids = segment.rid.tolist()
    for kind, role, rid in zip(kinds, roles, rids):
        if kind == KIND_LOWER:
            (sub if role == ROLE_SUB else upd).add(rid)
        elif role == ROLE_SUB:
            sub.discard(rid)
            for u in upd:
                sink(rid, u)
        else:
            upd.discard(rid)
            for s in sub:
                sink(s, rid)


@dataclass(frozen=True)
class _SegmentCounts:
    # cardinalities driving the count-only combine
    sub_add: int
    sub_del: int
    upd_add: int
    upd_del: int
    sub_uppers: int
    upd_uppers: int
    local_pairs: int


def _count_scan(segment: EndpointArray) -> _SegmentCounts:
    """Count-mode segment scan: delta sizes plus segment-local pair counts.

    Every upper endpoint contributes the size of the opposite active set;
    relative to the segment start that size splits into a within-segment
    running sum (known now) and the inherited set's cardinality (applied
    after the combine).
    """
    sub = segment.role == ROLE_SUB
    lower = segment.kind == KIND_LOWER
    sub_upper = sub & ~lower
    upd_upper = ~sub & ~lower

    upd_delta = (~sub & lower).astype(np.int64) - upd_upper.astype(np.int64)
    sub_delta = (sub & lower).astype(np.int64) - sub_upper.astype(np.int64)
    upd_running = np.cumsum(upd_delta) - upd_delta
    sub_running = np.cumsum(sub_delta) - sub_delta
    local_pairs = int(upd_running[sub_upper].sum()) + int(sub_running[upd_upper].sum())

    sub_lo = segment.rid[sub & lower]
    sub_up = segment.rid[sub_upper]
    upd_lo = segment.rid[~sub & lower]
    upd_up = segment.rid[upd_upper]
    sub_both = np.intersect1d(sub_lo, sub_up).size
    upd_both = np.intersect1d(upd_lo, upd_up).size
    return _SegmentCounts(
        sub_add=int(sub_lo.size - sub_both),
        sub_del=int(sub_up.size - sub_both),
        upd_add=int(upd_lo.size - upd_both),
        upd_del=int(upd_up.size - upd_both),
        sub_uppers=int(sub_up.size),
        upd_uppers=int(upd_up.size),
        local_pairs=local_pairs,
    )


def _combine_counts(stats: Sequence[_SegmentCounts]) -> int:
    sub_active = 0
    upd_active = 0
    total = 0
    for s in stats:
        total += s.local_pairs + s.sub_uppers * upd_active + s.upd_uppers * sub_active
        sub_active += s.sub_add - s.sub_del
        upd_active += s.upd_add - s.upd_del
    return total


def match_sbm_par(S: RegionSet, U: RegionSet, cfg: MatcherConfig | None = None) -> MatchReport:
    """Parallel segmented sweep over 1-D regions.

    Produces the same canonical report as the sequential sweep for every
    input and every worker count.
    """
    cfg = cfg or MatcherConfig()
    _require_1d(S, U)
    ep = sort_endpoints(_drop_empty_regions(build_endpoints(S, U), S, U), cfg.workers)
    bounds = segment_bounds(len(ep), cfg.workers)
    segments = [ep.slice(a, b) for a, b in bounds]

    if cfg.mode == COUNT_ONLY:
        stats = fork_join(_count_scan, segments, cfg.workers)
        return MatchReport.from_count(_combine_counts(stats))

    deltas = fork_join(segment_scan, segments, cfg.workers)
    active = prefix_combine(deltas)

    def scan(p: int) -> np.ndarray:
        codes: list[int] = []

        def sink(sid: int, uid: int) -> None:
            codes.append((sid << 32) | uid)

        final_scan(segments[p], active.sub_active[p], active.upd_active[p], sink)
        return np.asarray(codes, dtype=np.int64)

    buffers = fork_join(scan, list(range(len(segments))), cfg.workers)
    all_codes = np.concatenate(buffers) if buffers else np.empty(0, dtype=np.int64)
    return MatchReport.from_codes(all_codes, ENUMERATE)


def sequential_sweep_codes(ep: EndpointArray) -> np.ndarray:
    """One-segment sweep over an already sorted endpoint array."""
    codes: list[int] = []

    def sink(sid: int, uid: int) -> None:
        codes.append((sid << 32) | uid)

    final_scan(ep, (), (), sink)
    return np.asarray(codes, dtype=np.int64)


def match_sbm_seq(S: RegionSet, U: RegionSet, cfg: MatcherConfig | None = None) -> MatchReport:
    """Sequential sweep reference over 1-D regions.

    Scans the sorted endpoints once, keeping the active subscription and
    update sets; the overlap predicate is never evaluated.
    """
    cfg = cfg or MatcherConfig()
    _require_1d(S, U)
    ep = sort_endpoints(_drop_empty_regions(build_endpoints(S, U), S, U), workers=1)
    if cfg.mode == COUNT_ONLY:
        return MatchReport.from_count(_combine_counts([_count_scan(ep)]))
    return MatchReport.from_codes(sequential_sweep_codes(ep), ENUMERATE)
