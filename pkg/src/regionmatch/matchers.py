"""The four matching entry points plus the d-dimensional reduction wrapper.

All matchers share one result contract: the canonical report of distinct
overlapping (subscription id, update id) pairs, identical across
algorithms, worker counts and grid resolutions. Matching is half-open
throughout, so touching regions never pair.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .config import MatcherConfig
from .geometry import (
    COUNT_ONLY,
    ENUMERATE,
    MatchReport,
    RegionSet,
    encode_pairs,
    overlap_mask,
)
from .parallel import fork_join
from .parallel_sbm import match_sbm_par, match_sbm_seq, segment_bounds

# Upper bound on the elements of one broadcast overlap-test block; keeps a
# worker's temporaries around 10-20 MB.
_PAIR_BLOCK = 1 << 22


def _require_1d(S: RegionSet, U: RegionSet) -> None:
    if S.dimensions != 1 or U.dimensions != 1:
        raise ValueError(
            f"1-D matcher got d={S.dimensions} and d={U.dimensions}; use match_dd"
        )


def _empty_report(mode: str) -> MatchReport:
    return MatchReport.from_codes(np.empty(0, dtype=np.int64), mode)


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------

def match_bfm(S: RegionSet, U: RegionSet, cfg: MatcherConfig | None = None) -> MatchReport:
    """Test every subscription against every update.

    Quadratic but embarrassingly parallel: subscription rows are split into
    blocks and each worker evaluates the half-open predicate on its blocks.
    """
    cfg = cfg or MatcherConfig()
    _require_1d(S, U)
    n, m = len(S), len(U)
    if n == 0 or m == 0:
        return _empty_report(cfg.mode)

    s_lo, s_up = S.lowers[:, 0], S.uppers[:, 0]
    u_lo, u_up = U.lowers[:, 0], U.uppers[:, 0]
    rows_per_block = max(1, _PAIR_BLOCK // m)
    blocks = [(a, min(a + rows_per_block, n)) for a in range(0, n, rows_per_block)]

    if cfg.mode == COUNT_ONLY:
        def count_block(ab: tuple[int, int]) -> int:
            a, b = ab
            mask = overlap_mask(
                s_lo[a:b, None], s_up[a:b, None], u_lo[None, :], u_up[None, :]
            )
            return int(np.count_nonzero(mask))

        return MatchReport.from_count(sum(fork_join(count_block, blocks, cfg.workers)))

    def enum_block(ab: tuple[int, int]) -> np.ndarray:
        a, b = ab
        mask = overlap_mask(
            s_lo[a:b, None], s_up[a:b, None], u_lo[None, :], u_up[None, :]
        )
        si, ui = np.nonzero(mask)
        return encode_pairs(si + a, ui)

    codes = fork_join(enum_block, blocks, cfg.workers)
    return MatchReport.from_codes(np.concatenate(codes), ENUMERATE)


# ---------------------------------------------------------------------------
# Grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """A regular 1-D mesh over the bounding interval of both region sets.

    ``cells[i]`` lists the update-region ids overlapping the i-th cell
    [lb + i*width, lb + (i+1)*width). A zero width means the whole domain
    degenerated to a point and a single cell holds everything.
    """

    lb: float
    ub: float
    width: float
    ncells: int
    cells: list[np.ndarray]


def _cell_spans(
    lowers: np.ndarray, uppers: np.ndarray, lb: float, width: float, ncells: int
) -> tuple[np.ndarray, np.ndarray]:
    """First and one-past-last cell index touched by each half-open region."""
    nonempty = uppers > lowers
    if width <= 0.0:
        first = np.zeros(lowers.shape[0], dtype=np.int64)
        return first, nonempty.astype(np.int64)
    first = np.floor((lowers - lb) / width).astype(np.int64)
    np.clip(first, 0, ncells - 1, out=first)
    # guard against the division rounding up across a cell boundary
    first = np.where(lb + first * width > lowers, first - 1, first)
    np.clip(first, 0, None, out=first)
    last = np.ceil((uppers - lb) / width).astype(np.int64)
    # guard against the division rounding down across a cell boundary
    last = np.where(lb + last * width < uppers, last + 1, last)
    np.clip(last, 0, ncells, out=last)
    last = np.where(nonempty, np.maximum(last, first + 1), first)
    return first, last


def _emit_cell_pairs(
    lowers: np.ndarray, uppers: np.ndarray, lb: float, width: float, ncells: int
) -> tuple[np.ndarray, np.ndarray]:
    """(cell index, region id) incidence arrays for a block of regions."""
    first, last = _cell_spans(lowers, uppers, lb, width, ncells)
    counts = last - first
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    starts = np.repeat(first, counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(
        np.concatenate(([0], np.cumsum(counts)[:-1])), counts
    )
    ids = np.repeat(np.arange(lowers.shape[0], dtype=np.int64), counts)
    return starts + offsets, ids


def build_grid(
    U: RegionSet, ncells: int, lb: float, ub: float, workers: int = 1
) -> Grid:
    """Map every update region to the grid cells it overlaps.

    Workers emit (cell, id) pairs for disjoint region blocks; a stable sort
    by cell then yields deterministic per-cell lists without any locking.
    """
    width = (ub - lb) / ncells if ub > lb else 0.0
    if width == 0.0:
        ncells = 1
    u_lo, u_up = U.lowers[:, 0], U.uppers[:, 0]

    blocks = segment_bounds(len(U), max(1, workers))

    def emit(ab: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
        a, b = ab
        cells, ids = _emit_cell_pairs(u_lo[a:b], u_up[a:b], lb, width, ncells)
        return cells, ids + a

    parts = fork_join(emit, blocks, workers)
    cell_idx = np.concatenate([p[0] for p in parts]) if parts else np.empty(0, np.int64)
    ids = np.concatenate([p[1] for p in parts]) if parts else np.empty(0, np.int64)
    order = np.argsort(cell_idx, kind="stable")
    cell_idx, ids = cell_idx[order], ids[order]
    boundaries = np.searchsorted(cell_idx, np.arange(ncells + 1))
    cells = [ids[boundaries[c] : boundaries[c + 1]] for c in range(ncells)]
    return Grid(lb=lb, ub=ub, width=width, ncells=ncells, cells=cells)


def match_gbm(S: RegionSet, U: RegionSet, cfg: MatcherConfig | None = None) -> MatchReport:
    """Grid-based matching over a regular mesh of the bounding interval.

    Regions sharing a cell are cross-tested with the exact predicate, so
    the mesh resolution only affects speed. Duplicate hits from regions
    spanning several cells are removed before reporting.
    """
    cfg = cfg or MatcherConfig()
    _require_1d(S, U)
    if len(S) == 0 or len(U) == 0:
        return _empty_report(cfg.mode)

    all_lo = np.concatenate([S.lowers[:, 0], U.lowers[:, 0]])
    all_up = np.concatenate([S.uppers[:, 0], U.uppers[:, 0]])
    lb = float(all_lo.min())
    ub = float(all_up.max())
    grid = build_grid(U, cfg.gbm_ncells, lb, ub, cfg.workers)

    s_lo, s_up = S.lowers[:, 0], S.uppers[:, 0]
    u_lo, u_up = U.lowers[:, 0], U.uppers[:, 0]
    s_cells, s_ids = _emit_cell_pairs(s_lo, s_up, lb, grid.width, grid.ncells)
    order = np.argsort(s_cells, kind="stable")
    s_cells, s_ids = s_cells[order], s_ids[order]
    s_bounds = np.searchsorted(s_cells, np.arange(grid.ncells + 1))

    def probe(cell_range: tuple[int, int]) -> np.ndarray:
        found: list[np.ndarray] = []
        for c in range(*cell_range):
            subs = s_ids[s_bounds[c] : s_bounds[c + 1]]
            upds = grid.cells[c]
            if subs.size == 0 or upds.size == 0:
                continue
            step = max(1, _PAIR_BLOCK // upds.size)
            for a in range(0, subs.size, step):
                chunk = subs[a : a + step]
                mask = overlap_mask(
                    s_lo[chunk][:, None],
                    s_up[chunk][:, None],
                    u_lo[upds][None, :],
                    u_up[upds][None, :],
                )
                si, ui = np.nonzero(mask)
                found.append(encode_pairs(chunk[si], upds[ui]))
        if not found:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(found)

    ranges = segment_bounds(grid.ncells, max(1, cfg.workers))
    codes = np.concatenate(fork_join(probe, ranges, cfg.workers))
    return MatchReport.from_codes(codes, cfg.mode)


# ---------------------------------------------------------------------------
# Interval-tree matching
# ---------------------------------------------------------------------------

class _StaticIntervalTree:
    """Read-only interval tree laid out in arrays for batched queries.

    The balanced search tree over intervals sorted by (lower, upper, id)
    is represented implicitly: the node for a sorted-index range lives at
    the range's midpoint. Each node carries the subtree minimum lower
    bound and maximum upper bound, so whole subtrees that cannot overlap a
    query are pruned. Queries advance a frontier of (query, node) pairs
    one tree level per step, which lets a single worker resolve thousands
    of queries in a handful of vectorised passes.
    """

    def __init__(self, lowers: np.ndarray, uppers: np.ndarray):
        n = lowers.shape[0]
        self.n = n
        if n == 0:
            return
        order = np.lexsort((uppers, lowers))
        self.lo = lowers[order]
        self.hi = uppers[order]
        self.rid = order.astype(np.int64)
        self.left = np.full(n, -1, dtype=np.int64)
        self.right = np.full(n, -1, dtype=np.int64)
        self.min_lo = self.lo.copy()
        self.max_up = self.hi.copy()
        self.root = (n - 1) // 2 if n else -1

        # carve ranges level by level: node(a, b) sits at mid = (a+b-1)//2
        levels: list[np.ndarray] = []
        a = np.array([0], dtype=np.int64)
        b = np.array([n], dtype=np.int64)
        while a.size:
            mid = (a + b - 1) // 2
            levels.append(mid)
            left_has = mid > a
            right_has = b > mid + 1
            lmid = (a[left_has] + mid[left_has] - 1) // 2
            rmid = (mid[right_has] + 1 + b[right_has] - 1) // 2
            self.left[mid[left_has]] = lmid
            self.right[mid[right_has]] = rmid
            a = np.concatenate([a[left_has], mid[right_has] + 1])
            b = np.concatenate([mid[left_has], b[right_has]])

        for mid in reversed(levels):
            for child_arr in (self.left[mid], self.right[mid]):
                has = child_arr >= 0
                idx, child = mid[has], child_arr[has]
                self.min_lo[idx] = np.minimum(self.min_lo[idx], self.min_lo[child])
                self.max_up[idx] = np.maximum(self.max_up[idx], self.max_up[child])

    def query_batch(
        self, q_lo: np.ndarray, q_up: np.ndarray, collect: bool
    ) -> tuple[int, np.ndarray, np.ndarray]:
        """Count or enumerate overlaps for a batch of query intervals.

        Returns (hit count, query indices, stored ids); the index arrays
        are empty when ``collect`` is false.
        """
        hits_q: list[np.ndarray] = []
        hits_r: list[np.ndarray] = []
        total = 0
        if self.n == 0 or q_lo.shape[0] == 0:
            return 0, np.empty(0, np.int64), np.empty(0, np.int64)
        q = np.arange(q_lo.shape[0], dtype=np.int64)
        node = np.full(q.shape[0], self.root, dtype=np.int64)
        while q.size:
            # prune subtrees entirely at or beyond the half-open query
            keep = (self.max_up[node] > q_lo[q]) & (self.min_lo[node] < q_up[q])
            q, node = q[keep], node[keep]
            if not q.size:
                break
            lo_n, hi_n = self.lo[node], self.hi[node]
            hit = np.maximum(lo_n, q_lo[q]) < np.minimum(hi_n, q_up[q])
            total += int(np.count_nonzero(hit))
            if collect:
                hits_q.append(q[hit])
                hits_r.append(self.rid[node[hit]])
            left = self.left[node]
            go_left = left >= 0
            right = self.right[node]
            go_right = (right >= 0) & (q_up[q] > lo_n)
            q = np.concatenate([q[go_left], q[go_right]])
            node = np.concatenate([left[go_left], right[go_right]])
        if collect and hits_q:
            return total, np.concatenate(hits_q), np.concatenate(hits_r)
        return total, np.empty(0, np.int64), np.empty(0, np.int64)


def _choose_tree_side(S: RegionSet, U: RegionSet, cfg: MatcherConfig) -> str:
    if cfg.itm_tree_side != "auto":
        return cfg.itm_tree_side
    # index the strictly smaller set; ties keep the tree on subscriptions
    return "updates" if len(U) < len(S) else "subscriptions"


def match_itm(S: RegionSet, U: RegionSet, cfg: MatcherConfig | None = None) -> MatchReport:
    """Interval-tree matching: index one side, query with the other.

    The tree is immutable once built, so query batches run concurrently
    across workers without synchronisation.
    """
    cfg = cfg or MatcherConfig()
    _require_1d(S, U)
    side = _choose_tree_side(S, U, cfg)
    indexed, probing = (S, U) if side == "subscriptions" else (U, S)
    if len(probing) == 0 or len(indexed) == 0:
        return _empty_report(cfg.mode)

    tree = _StaticIntervalTree(indexed.lowers[:, 0], indexed.uppers[:, 0])
    q_lo, q_up = probing.lowers[:, 0], probing.uppers[:, 0]
    collect = cfg.mode == ENUMERATE
    blocks = segment_bounds(len(probing), cfg.workers)

    def run(ab: tuple[int, int]) -> tuple[int, np.ndarray, np.ndarray]:
        a, b = ab
        count, qi, ri = tree.query_batch(q_lo[a:b], q_up[a:b], collect)
        return count, qi + a, ri

    results = fork_join(run, blocks, cfg.workers)
    if cfg.mode == COUNT_ONLY:
        return MatchReport.from_count(sum(r[0] for r in results))
    qi = np.concatenate([r[1] for r in results])
    ri = np.concatenate([r[2] for r in results])
    if side == "subscriptions":
        codes = encode_pairs(ri, qi)
    else:
        codes = encode_pairs(qi, ri)
    return MatchReport.from_codes(codes, ENUMERATE)


# ---------------------------------------------------------------------------
# d-dimensional reduction
# ---------------------------------------------------------------------------

ALGORITHMS: dict[str, Callable[[RegionSet, RegionSet, MatcherConfig], MatchReport]] = {
    "bfm": match_bfm,
    "gbm": match_gbm,
    "itm": match_itm,
    "sbm-seq": match_sbm_seq,
    "sbm-par": match_sbm_par,
}


def match_dd(
    S: RegionSet, U: RegionSet, algo: str, cfg: MatcherConfig | None = None
) -> MatchReport:
    """Match d-dimensional regions with any 1-D algorithm.

    Runs the 1-D matcher on every dimension's projections and intersects
    the per-dimension pair sets, which is exactly the pairs whose
    projections overlap on all dimensions.
    """
    cfg = cfg or MatcherConfig()
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}, expected one of {sorted(ALGORITHMS)}")
    if S.dimensions != U.dimensions:
        raise ValueError(f"dimension mismatch: {S.dimensions} vs {U.dimensions}")
    fn = ALGORITHMS[algo]
    if S.dimensions == 1:
        return fn(S, U, cfg)

    per_dim_cfg = replace(cfg, mode=ENUMERATE)
    codes: np.ndarray | None = None
    for dim in range(S.dimensions):
        report = fn(S.projected(dim), U.projected(dim), per_dim_cfg)
        dim_codes = encode_pairs(report.pairs[:, 0], report.pairs[:, 1])
        if codes is None:
            codes = dim_codes
        else:
            codes = np.intersect1d(codes, dim_codes, assume_unique=True)
        if codes.size == 0:
            break
    assert codes is not None
    return MatchReport.from_codes(codes, cfg.mode)
