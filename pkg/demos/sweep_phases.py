"""Inside the parallel sweep, phase by phase.

Takes a dozen 1-D regions, sorts their endpoints, splits them into
segments, and prints what each phase of the parallel sort-based matcher
computes: the per-segment delta sets, the prefix-combined active sets,
and the pairs each final scan reports.
"""

from regionmatch import (
    SUBSCRIPTION,
    UPDATE,
    build_endpoints,
    final_scan,
    match_sbm_seq,
    prefix_combine,
    regions_from_intervals,
    segment_bounds,
    segment_scan,
    sort_endpoints,
)
from regionmatch.parallel_sbm import KIND_LOWER

S = regions_from_intervals(SUBSCRIPTION, [(1, 6), (4, 11), (9, 14), (13, 20), (2, 17)])
U = regions_from_intervals(UPDATE, [(0, 3), (5, 8), (10, 12), (6, 19), (15, 16), (18, 21)])

# Phase 0: both endpoints of every region, sorted with upper bounds before
# lower bounds at equal coordinates (that tie rule is what keeps touching
# half-open regions apart).
ep = sort_endpoints(build_endpoints(S, U))
print(f"{len(ep)} endpoints after sorting:")
print("  " + " ".join(
    f"{c:g}{'L' if k == KIND_LOWER else 'U'}{'su'[r]}{i}"
    for c, k, r, i in ep.sort_key_rows()
))

workers = 3
bounds = segment_bounds(len(ep), workers)
segments = [ep.slice(a, b) for a, b in bounds]
print(f"\nsplit into {workers} segments: {bounds}")

# Phase 1 (parallel): each worker scans only its slice and records which
# regions it opened without closing (add) and closed without opening (del).
deltas = [segment_scan(seg) for seg in segments]
for p, d in enumerate(deltas):
    print(
        f"  segment {p}: sub_add={sorted(d.sub_add)} sub_del={sorted(d.sub_del)} "
        f"upd_add={sorted(d.upd_add)} upd_del={sorted(d.upd_del)}"
    )

# Phase 2 (serial, tiny): the prefix combine turns deltas into the exact
# active sets each segment inherits from everything to its left.
active = prefix_combine(deltas)
print("\nactive sets entering each segment:")
for p in range(workers):
    print(
        f"  segment {p}: subscriptions={sorted(active.sub_active[p])} "
        f"updates={sorted(active.upd_active[p])}"
    )

# Phase 3 (parallel): ordinary sweeps, one per segment, each seeded with
# its inherited active sets.
all_pairs = []
for p in range(workers):
    reported = []
    final_scan(segments[p], active.sub_active[p], active.upd_active[p],
               lambda s, u: reported.append((s, u)))
    print(f"\nsegment {p} reports {sorted(reported)}")
    all_pairs.extend(reported)

sequential = match_sbm_seq(S, U)
assert set(all_pairs) == sequential.pair_set()
assert len(all_pairs) == sequential.count
print(f"\nunion of segment reports == sequential sweep: K = {sequential.count}")
