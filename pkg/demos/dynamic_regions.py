"""Moving regions without re-matching from scratch.

A session keeps per-role interval trees, so each move costs two tree
updates per dimension and immediately reports the moved region's current
overlaps.
"""

from regionmatch import (
    SUBSCRIPTION,
    UPDATE,
    Interval,
    dyn_session_create,
    dyn_update_region,
    regions_from_intervals,
)

# Three parked vehicles (subscriptions) and two moving ones (updates).
S = regions_from_intervals(SUBSCRIPTION, [(0, 40), (100, 140), (200, 240)])
U = regions_from_intervals(UPDATE, [(30, 70), (300, 340)])

session = dyn_session_create(S, U)
print("initial overlaps of update 0:", sorted(session.overlaps_of(UPDATE, 0).pair_set()))
print("initial overlaps of update 1:", sorted(session.overlaps_of(UPDATE, 1).pair_set()))

# Update 1 drives into the second subscription's range.
report = dyn_update_region(session, UPDATE, 1, [Interval(120, 160)])
print("\nupdate 1 moved to [120, 160):", sorted(report.pair_set()))

# Subscription 0 widens and now also sees update 1? No: they are far
# apart. But it loses update 0 when that one drives off.
report = dyn_update_region(session, UPDATE, 0, [Interval(500, 540)])
print("update 0 moved to [500, 540):", sorted(report.pair_set()))

# A touching move does not create an overlap: half-open ranges.
report = dyn_update_region(session, UPDATE, 0, [Interval(40, 80)])
print("update 0 moved to [40, 80), touching subscription 0:", sorted(report.pair_set()))

# Nudge it one unit left and the pair appears.
report = dyn_update_region(session, UPDATE, 0, [Interval(39, 79)])
print("update 0 moved to [39, 79):", sorted(report.pair_set()))
