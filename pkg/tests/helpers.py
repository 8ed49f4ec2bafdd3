"""Independent oracles and builders shared by the test modules.

Everything here is deliberately written against different formulations
than the library uses: the brute-force oracle tests non-overlap by
negation, the sweep references are single-pass conditional loops over
Python sets. The library must agree with these, not the other way round.
"""

from __future__ import annotations

import numpy as np

from regionmatch import SUBSCRIPTION, UPDATE, RegionSet
from regionmatch.parallel_sbm import KIND_LOWER, KIND_UPPER, ROLE_SUB, ROLE_UPD


def rs(role: str, bounds) -> RegionSet:
    """1-D region set from (lower, upper) pairs."""
    if not bounds:
        return RegionSet.empty(role)
    lo = np.array([[b[0]] for b in bounds], dtype=float)
    up = np.array([[b[1]] for b in bounds], dtype=float)
    return RegionSet(role, lo, up)


def rs_dd(role: str, boxes) -> RegionSet:
    """d-D region set from sequences of (lower, upper) pairs per region."""
    lo = np.array([[iv[0] for iv in box] for box in boxes], dtype=float)
    up = np.array([[iv[1] for iv in box] for box in boxes], dtype=float)
    return RegionSet(role, lo, up)


def oracle_pair_set(S: RegionSet, U: RegionSet, closed: bool = False) -> set[tuple[int, int]]:
    """Brute-force d-dimensional overlap oracle.

    Tests non-overlap by negation per dimension and excludes empty
    intervals explicitly. ``closed=True`` switches to closed-interval
    comparisons (touching intervals overlap), a variant kept only for
    harness experiments.
    """
    n, m = len(S), len(U)
    if n == 0 or m == 0:
        return set()
    s_lo = S.lowers[:, None, :]
    s_up = S.uppers[:, None, :]
    u_lo = U.lowers[None, :, :]
    u_up = U.uppers[None, :, :]
    if closed:
        disjoint = (s_up < u_lo) | (u_up < s_lo)
    else:
        disjoint = (s_up <= u_lo) | (u_up <= s_lo)
    per_dim = ~disjoint & (s_lo < s_up) & (u_lo < u_up)
    overlap = per_dim.all(axis=2)
    return {(int(i), int(j)) for i, j in zip(*np.nonzero(overlap))}


def oracle_pairs_of_region(
    S: RegionSet, U: RegionSet, role: str, region_id: int
) -> set[tuple[int, int]]:
    """Oracle pair set restricted to one region of the given role."""
    full = oracle_pair_set(S, U)
    if role == SUBSCRIPTION:
        return {p for p in full if p[0] == region_id}
    return {p for p in full if p[1] == region_id}


def endpoint_rows(S: RegionSet, U: RegionSet) -> list[tuple[float, int, int, int]]:
    """Sorted (coordinate, kind, role, id) endpoint rows, built independently."""
    rows = []
    for role_code, regions in ((ROLE_SUB, S), (ROLE_UPD, U)):
        for rid in range(len(regions)):
            lo = float(regions.lowers[rid, 0])
            up = float(regions.uppers[rid, 0])
            rows.append((lo, KIND_LOWER, role_code, rid))
            rows.append((up, KIND_UPPER, role_code, rid))
    rows.sort()
    return rows


def reference_segment_deltas(rows) -> tuple[set, set, set, set]:
    """Single-pass conditional delta computation over one endpoint slice.

    Walks the slice once: a lower endpoint opens its region; an upper
    endpoint cancels a same-slice open, otherwise records a close.
    Returns (sub_add, sub_del, upd_add, upd_del).
    """
    sub_add: set[int] = set()
    sub_del: set[int] = set()
    upd_add: set[int] = set()
    upd_del: set[int] = set()
    for _, kind, role, rid in rows:
        add, dele = (sub_add, sub_del) if role == ROLE_SUB else (upd_add, upd_del)
        if kind == KIND_LOWER:
            add.add(rid)
        elif rid in add:
            add.discard(rid)
        else:
            dele.add(rid)
    return sub_add, sub_del, upd_add, upd_del


def reference_active_states(rows, boundaries) -> list[tuple[frozenset, frozenset]]:
    """Active sets a sequential sweep holds at each segment start.

    ``boundaries`` are the segment (start, stop) index pairs over the
    sorted rows; entry p is the state right after the last endpoint of
    segment p-1 was processed.
    """
    sub: set[int] = set()
    upd: set[int] = set()
    states = []
    position = 0
    for start, _ in boundaries:
        while position < start:
            _, kind, role, rid = rows[position]
            active = sub if role == ROLE_SUB else upd
            if kind == KIND_LOWER:
                active.add(rid)
            else:
                active.discard(rid)
            position += 1
        states.append((frozenset(sub), frozenset(upd)))
    return states


def reference_sweep_pairs(rows) -> set[tuple[int, int]]:
    """Full sequential sweep over sorted endpoint rows."""
    sub: set[int] = set()
    upd: set[int] = set()
    pairs: set[tuple[int, int]] = set()
    for _, kind, role, rid in rows:
        if kind == KIND_LOWER:
            (sub if role == ROLE_SUB else upd).add(rid)
        elif role == ROLE_SUB:
            sub.discard(rid)
            pairs.update((rid, u) for u in upd)
        else:
            upd.discard(rid)
            pairs.update((s, rid) for s in sub)
    return pairs


def quantized_instance(seed: int, total: int, levels: int = 40, span: float = 100.0):
    """Instance with heavily duplicated endpoint coordinates.

    Coordinates come from a small integer lattice, so equal values abound
    and segment boundaries routinely split ties.
    """
    rng = np.random.default_rng(seed)
    half = total // 2

    def mk(role):
        lo = rng.integers(0, levels, size=half).astype(float) * (span / levels)
        ln = rng.integers(1, 6, size=half).astype(float) * (span / levels)
        return RegionSet(role, lo[:, None], (lo + ln)[:, None])

    return mk(SUBSCRIPTION), mk(UPDATE)


def duplicate_coordinate_fraction(S: RegionSet, U: RegionSet) -> float:
    """Fraction of endpoint coordinates that repeat elsewhere in the input."""
    coords = np.concatenate(
        [S.lowers[:, 0], S.uppers[:, 0], U.lowers[:, 0], U.uppers[:, 0]]
    )
    _, counts = np.unique(coords, return_counts=True)
    return float(counts[counts > 1].sum()) / coords.size
