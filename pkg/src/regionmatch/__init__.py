"""Region matching for spatial publish/subscribe.

Enumerates or counts all overlapping (subscription, update) pairs among
two sets of axis-parallel, half-open d-rectangles, using four
interchangeable algorithms: brute force, grid hashing, interval-tree
matching and a sort-based sweep with a parallel segmented variant. A
workload generator, a trace ingester and a benchmark harness round out
the package.
"""

from .config import DEFAULT_GBM_CELLS, MatcherConfig
from .dynamic import DynSession, dyn_session_create, dyn_update_region
from .geometry import (
    COUNT_ONLY,
    ENUMERATE,
    SUBSCRIPTION,
    UPDATE,
    Interval,
    MatchReport,
    Region,
    RegionSet,
    intersect_1d,
    intersect_dd,
    regions_from_intervals,
    validate_regions,
)
from .interval_tree import IntervalTree
from .matchers import (
    ALGORITHMS,
    Grid,
    build_grid,
    match_bfm,
    match_dd,
    match_gbm,
    match_itm,
)
from .parallel_sbm import (
    ActiveSets,
    EndpointArray,
    SegmentDeltas,
    build_endpoints,
    final_scan,
    match_sbm_par,
    match_sbm_seq,
    prefix_combine,
    segment_bounds,
    segment_scan,
    sort_endpoints,
)
from .regionfile import read_regions, write_regions
from .workload import (
    SyntheticSpec,
    TraceSpec,
    gen_uniform,
    gen_uniform_dd,
    load_trace,
    measured_alpha,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "ActiveSets",
    "COUNT_ONLY",
    "DEFAULT_GBM_CELLS",
    "DynSession",
    "ENUMERATE",
    "EndpointArray",
    "Grid",
    "Interval",
    "IntervalTree",
    "MatchReport",
    "MatcherConfig",
    "Region",
    "RegionSet",
    "SUBSCRIPTION",
    "SegmentDeltas",
    "SyntheticSpec",
    "TraceSpec",
    "UPDATE",
    "build_endpoints",
    "build_grid",
    "dyn_session_create",
    "dyn_update_region",
    "final_scan",
    "gen_uniform",
    "gen_uniform_dd",
    "intersect_1d",
    "intersect_dd",
    "load_trace",
    "match_bfm",
    "match_dd",
    "match_gbm",
    "match_itm",
    "match_sbm_par",
    "match_sbm_seq",
    "measured_alpha",
    "prefix_combine",
    "read_regions",
    "regions_from_intervals",
    "segment_bounds",
    "segment_scan",
    "sort_endpoints",
    "validate_regions",
    "write_regions",
]
