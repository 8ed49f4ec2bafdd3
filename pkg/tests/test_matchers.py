"""The four matcher entry points and the d-dimensional wrapper."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import regionmatch.matchers
import regionmatch.parallel_sbm
from regionmatch import (
    ALGORITHMS,
    COUNT_ONLY,
    SUBSCRIPTION,
    UPDATE,
    MatcherConfig,
    RegionSet,
    build_endpoints,
    build_grid,
    match_bfm,
    match_dd,
    match_gbm,
    match_itm,
    match_sbm_par,
    match_sbm_seq,
    prefix_combine,
    segment_bounds,
    segment_scan,
    sort_endpoints,
)
from regionmatch.matchers import _choose_tree_side
from regionmatch.workload import SyntheticSpec, gen_uniform_dd

from helpers import oracle_pair_set, rs, rs_dd

# Two-dimensional fixture: three subscriptions, two updates, exactly four
# overlapping pairs; S1/U0 touch at x=7 so the half-open rule is exercised.
FIXTURE_S = rs_dd(
    SUBSCRIPTION,
    [
        [(0.0, 4.0), (6.0, 10.0)],
        [(7.0, 12.0), (0.0, 3.0)],
        [(5.0, 11.0), (2.0, 9.0)],
    ],
)
FIXTURE_U = rs_dd(
    UPDATE,
    [
        [(3.0, 7.0), (7.0, 10.0)],
        [(6.0, 10.0), (1.0, 5.0)],
    ],
)
FIXTURE_PAIRS = {(0, 0), (1, 1), (2, 0), (2, 1)}

bounds1d = st.tuples(
    st.integers(min_value=0, max_value=50), st.integers(min_value=0, max_value=12)
).map(lambda p: (float(p[0]), float(p[0] + p[1])))


def random_sets(seed, n, m, span=60, max_len=10):
    rng = np.random.default_rng(seed)

    def mk(role, k):
        lo = rng.uniform(0, span, size=k)
        ln = rng.uniform(0, max_len, size=k)
        return RegionSet(role, lo[:, None], (lo + ln)[:, None])

    return mk(SUBSCRIPTION, n), mk(UPDATE, m)


class TestBfm:
    def test_two_dim_fixture_projection(self):
        rep = match_bfm(FIXTURE_S.projected(0), FIXTURE_U.projected(0))
        assert rep.pair_set() == FIXTURE_PAIRS

    def test_empty_subscriptions(self):
        rep = match_bfm(rs(SUBSCRIPTION, []), rs(UPDATE, [(0, 5)]))
        assert rep.count == 0

    def test_worker_count_does_not_change_the_report(self):
        S, U = random_sets(1, 200, 180)
        one = match_bfm(S, U, MatcherConfig(workers=1))
        eight = match_bfm(S, U, MatcherConfig(workers=8))
        assert one.same_pairs(eight)

    def test_rejects_multidimensional_input(self):
        with pytest.raises(ValueError):
            match_bfm(FIXTURE_S, FIXTURE_U)


class TestGbm:
    def test_projection_agrees_with_bfm_on_four_cells(self):
        cfg = MatcherConfig(gbm_ncells=4)
        rep = match_gbm(FIXTURE_S.projected(0), FIXTURE_U.projected(0), cfg)
        assert rep.pair_set() == FIXTURE_PAIRS

    def test_domain_spanning_region_pairs_with_everyone(self):
        S = rs(SUBSCRIPTION, [(0.0, 100.0)])
        U = rs(UPDATE, [(5.0, 6.0), (50.0, 51.0), (99.0, 100.0)])
        rep = match_gbm(S, U, MatcherConfig(gbm_ncells=8))
        assert rep.pair_set() == {(0, 0), (0, 1), (0, 2)}

    def test_single_cell_degenerates_to_brute_force(self):
        S, U = random_sets(2, 60, 60)
        rep = match_gbm(S, U, MatcherConfig(gbm_ncells=1))
        assert rep.pair_set() == match_bfm(S, U).pair_set()

    def test_point_domain_falls_back_to_one_cell(self):
        S = rs(SUBSCRIPTION, [(5.0, 5.0), (5.0, 5.0)])
        U = rs(UPDATE, [(5.0, 5.0)])
        rep = match_gbm(S, U, MatcherConfig(gbm_ncells=100))
        assert rep.count == 0

    @pytest.mark.parametrize("ncells", [1, 2, 3, 7, 50, 1000])
    def test_pair_set_is_independent_of_cell_count(self, ncells):
        S, U = random_sets(3, 120, 110)
        rep = match_gbm(S, U, MatcherConfig(gbm_ncells=ncells))
        assert rep.pair_set() == match_bfm(S, U).pair_set()

    def test_grid_cells_only_hold_overlapping_regions(self):
        S, U = random_sets(4, 40, 45)
        lb = float(min(S.lowers.min(), U.lowers.min()))
        ub = float(max(S.uppers.max(), U.uppers.max()))
        grid = build_grid(U, 16, lb, ub)
        for c, ids in enumerate(grid.cells):
            cell_lo = lb + c * grid.width
            cell_up = lb + (c + 1) * grid.width
            for rid in ids.tolist():
                assert U.lowers[rid, 0] < cell_up and cell_lo < U.uppers[rid, 0]

    def test_worker_count_does_not_change_the_report(self):
        S, U = random_sets(5, 150, 140)
        one = match_gbm(S, U, MatcherConfig(workers=1, gbm_ncells=13))
        six = match_gbm(S, U, MatcherConfig(workers=6, gbm_ncells=13))
        assert one.same_pairs(six)


class TestItm:
    def test_projection_agrees_with_bfm(self):
        rep = match_itm(FIXTURE_S.projected(0), FIXTURE_U.projected(0))
        assert rep.pair_set() == FIXTURE_PAIRS

    def test_empty_update_side_issues_no_queries(self):
        rep = match_itm(rs(SUBSCRIPTION, [(0, 5)]), rs(UPDATE, []))
        assert rep.count == 0

    def test_auto_side_picks_the_smaller_set(self):
        small_s = rs(SUBSCRIPTION, [(0.0, 1.0)])
        big_u = rs(UPDATE, [(float(i), float(i + 1)) for i in range(1000)])
        assert _choose_tree_side(small_s, big_u, MatcherConfig()) == "subscriptions"
        assert _choose_tree_side(big_u, small_s, MatcherConfig()) == "updates"
        # ties keep the tree on subscriptions
        assert _choose_tree_side(small_s, rs(UPDATE, [(0.0, 1.0)]), MatcherConfig()) == "subscriptions"

    @pytest.mark.parametrize("side", ["auto", "subscriptions", "updates"])
    def test_forced_side_yields_the_same_pairs(self, side):
        S, U = random_sets(6, 90, 40)
        rep = match_itm(S, U, MatcherConfig(itm_tree_side=side))
        assert rep.pair_set() == match_bfm(S, U).pair_set()

    def test_worker_count_does_not_change_the_report(self):
        S, U = random_sets(7, 130, 120)
        one = match_itm(S, U, MatcherConfig(workers=1))
        five = match_itm(S, U, MatcherConfig(workers=5))
        assert one.same_pairs(five)


class TestSweepStructure:
    def test_sweep_never_evaluates_the_overlap_predicate(self, monkeypatch):
        S, U = random_sets(8, 40, 40)

        def forbidden(*args, **kwargs):
            raise AssertionError("overlap predicate evaluated inside the sweep")

        monkeypatch.setattr(regionmatch.matchers, "overlap_mask", forbidden)
        match_sbm_seq(S, U)
        match_sbm_par(S, U, MatcherConfig(workers=4))
        # the sweep module does not even import the predicate helpers
        assert not hasattr(regionmatch.parallel_sbm, "overlap_mask")
        assert not hasattr(regionmatch.parallel_sbm, "intersect_1d")

    def test_bfm_does_evaluate_the_predicate(self, monkeypatch):
        S, U = random_sets(9, 10, 10)
        calls = {"n": 0}
        real = regionmatch.matchers.overlap_mask

        def counting(*args, **kwargs):
            calls["n"] += 1
            return real(*args, **kwargs)

        monkeypatch.setattr(regionmatch.matchers, "overlap_mask", counting)
        match_bfm(S, U)
        assert calls["n"] > 0

    def test_active_set_evolution_for_five_subscription_intervals(self):
        # five intervals swept left to right; the subscription active set
        # must walk through exactly this hand-derived sequence
        S = rs(SUBSCRIPTION, [(1, 4), (2, 6), (5, 8), (7, 12), (9, 10)])
        U = rs(UPDATE, [])
        ep = sort_endpoints(build_endpoints(S, U))
        bounds = segment_bounds(len(ep), len(ep))  # one endpoint per segment
        active = prefix_combine([segment_scan(ep.slice(a, b)) for a, b in bounds])
        expected = [
            frozenset(),
            frozenset({0}),
            frozenset({0, 1}),
            frozenset({1}),
            frozenset({1, 2}),
            frozenset({2}),
            frozenset({2, 3}),
            frozenset({3}),
            frozenset({3, 4}),
            frozenset({3}),
        ]
        assert list(active.sub_active) == expected


class TestMatchDd:
    @pytest.mark.parametrize("algo", sorted(ALGORITHMS))
    def test_two_dim_fixture_yields_exactly_the_four_pairs(self, algo):
        rep = match_dd(FIXTURE_S, FIXTURE_U, algo, MatcherConfig(workers=2))
        assert rep.pair_set() == FIXTURE_PAIRS

    @pytest.mark.parametrize("algo", sorted(ALGORITHMS))
    def test_one_dimension_degenerates_to_the_matcher(self, algo):
        S, U = random_sets(10, 50, 50)
        direct = ALGORITHMS[algo](S, U, MatcherConfig())
        wrapped = match_dd(S, U, algo, MatcherConfig())
        assert wrapped.same_pairs(direct)

    @pytest.mark.parametrize("algo", sorted(ALGORITHMS))
    def test_three_dim_random_equals_oracle(self, algo):
        S, U = gen_uniform_dd(SyntheticSpec(total_regions=300, alpha=20.0, seed=4), 3)
        rep = match_dd(S, U, algo, MatcherConfig(workers=3))
        assert rep.pair_set() == oracle_pair_set(S, U)

    def test_mixed_dimensionality_is_an_error(self):
        with pytest.raises(ValueError):
            match_dd(FIXTURE_S, FIXTURE_U.projected(0), "bfm")

    def test_unknown_algorithm_is_an_error(self):
        with pytest.raises(ValueError):
            match_dd(FIXTURE_S, FIXTURE_U, "quadtree")

    def test_count_mode_in_three_dims(self):
        S, U = gen_uniform_dd(SyntheticSpec(total_regions=200, alpha=30.0, seed=5), 3)
        rep = match_dd(S, U, "sbm-par", MatcherConfig(mode=COUNT_ONLY, workers=2))
        assert rep.count == len(oracle_pair_set(S, U))


class TestCrossAlgorithmAgreement:
    @given(
        st.lists(bounds1d, max_size=25),
        st.lists(bounds1d, max_size=25),
        st.integers(min_value=1, max_value=8),
        st.integers(min_value=1, max_value=20),
    )
    @settings(max_examples=60, deadline=None)
    def test_all_matchers_agree_with_the_oracle(self, subs, upds, workers, ncells):
        S, U = rs(SUBSCRIPTION, subs), rs(UPDATE, upds)
        expected = oracle_pair_set(S, U)
        cfg = MatcherConfig(workers=workers, gbm_ncells=ncells)
        for name, fn in ALGORITHMS.items():
            assert fn(S, U, cfg).pair_set() == expected, name

    @given(st.lists(bounds1d, max_size=20), st.lists(bounds1d, max_size=20))
    @settings(max_examples=40, deadline=None)
    def test_count_mode_matches_enumerate_cardinality(self, subs, upds):
        S, U = rs(SUBSCRIPTION, subs), rs(UPDATE, upds)
        for name, fn in ALGORITHMS.items():
            enumerated = fn(S, U, MatcherConfig())
            counted = fn(S, U, MatcherConfig(mode=COUNT_ONLY))
            assert counted.count == enumerated.count, name


class TestMatcherConfig:
    def test_rejects_zero_workers(self):
        with pytest.raises(ValueError):
            MatcherConfig(workers=0)

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError):
            MatcherConfig(mode="stream")

    def test_rejects_zero_cells(self):
        with pytest.raises(ValueError):
            MatcherConfig(gbm_ncells=0)

    def test_rejects_unknown_tree_side(self):
        with pytest.raises(ValueError):
            MatcherConfig(itm_tree_side="left")
