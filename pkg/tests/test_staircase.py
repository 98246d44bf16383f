import math

import numpy as np
import pytest

import gdskit as gk
from gdskit.distances import SearchConfig
from gdskit.errors import LevelMismatch
from gdskit.staircase import (
    level_hausdorff,
    rho_estimate,
    series_tail,
    series_weight,
    staircase_distance,
    staircase_level,
)
from gdskit.transforms import enumerate_measurements
from oracles import canonical_form, dyadic_gds

GRID = tuple([0.01] + [round(0.05 * i, 2) for i in range(1, 10)])
CFG = SearchConfig(kappa_grid=GRID, coupling_candidates=3, local_search_steps=10, level_budget=8)


def two_point(n, family=gk.TB_FAMILY):
    return gk.validate_gds([0, 1], [[0.0, float(n)]], family, [0.5, 0.5])


class TestSeries:
    def test_weights(self):
        assert series_weight(1) == 0.25
        assert series_weight(2) == 1 / 16
        assert series_weight(3) == 1 / 48

    def test_weight_sum_identity(self):
        # sum over N of weight(N) * 2N = sum 2^-N = 1
        total = sum(series_weight(N) * 2 * N for N in range(1, 200))
        assert total == pytest.approx(1.0, abs=1e-15)

    def test_tail_closed_form(self):
        for L in (1, 2, 3, 5, 10, 20):
            direct = sum(series_weight(N) for N in range(L + 1, L + 400))
            assert series_tail(L) == pytest.approx(direct, abs=1e-15)

    def test_tail_after_two_levels_bound(self):
        assert series_tail(2) < 2.0**-3


class TestStaircaseLevel:
    def test_two_generator_level_one(self):
        gens = np.array([[0.0, 1.0, 2.0], [2.0, 0.0, 1.0]])
        X = gk.validate_gds(range(3), gens, gk.TB_FAMILY, [0.25, 0.25, 0.5])
        level = staircase_level(X, 1, budget=16)
        assert level.exhaustive
        assert len(level.members) == 2

    def test_level_at_or_above_generator_count(self):
        rng = np.random.default_rng(3)
        X = dyadic_gds(rng, max_gens=2)
        level = staircase_level(X, 5, budget=16)
        assert level.exhaustive
        assert len(level.members) == 1

    def test_budget_limited(self):
        rng = np.random.default_rng(5)
        gens = np.vstack([np.arange(5.0) + rng.uniform(-0.2, 0.2, 5) for _ in range(12)])
        X = gk.validate_gds(range(5), gens, gk.TB_FAMILY, np.full(5, 0.2))
        level = staircase_level(X, 3, budget=7, seed=1)
        assert not level.exhaustive
        assert len(level.members) == 7

    def test_members_are_bounded(self):
        rng = np.random.default_rng(7)
        X = dyadic_gds(rng, max_gens=3, span=6)
        for N in (1, 2):
            level = staircase_level(X, N, budget=16)
            for member in level.members:
                assert member.n_generators <= N
                assert np.all(np.abs(member.generators) <= N)


class TestLevelHausdorff:
    def test_identical_levels(self):
        X = two_point(1.0)
        a = staircase_level(X, 1, budget=8)
        br = level_hausdorff(a, a, CFG)
        assert br.lower == 0.0 and br.upper == 0.0

    def test_clip_identifies_two_point_pair_at_level_one(self):
        a = staircase_level(two_point(1.0), 1, budget=8)
        b = staircase_level(two_point(2.0), 1, budget=8)
        br = level_hausdorff(a, b, CFG)
        assert br.upper == 0.0  # b_1 clips (0, 2) to (0, 1)

    def test_sampled_levels_are_estimates(self):
        rng = np.random.default_rng(9)
        gens = np.vstack([np.arange(4.0) * (1 + 0.1 * i) for i in range(9)])
        X = gk.validate_gds(range(4), gens, gk.TB_FAMILY, np.full(4, 0.25))
        full = staircase_level(X, 2, budget=1000)
        sampled = staircase_level(X, 2, budget=3)
        assert full.exhaustive and not sampled.exhaustive
        br = level_hausdorff(full, sampled, CFG)
        assert br.estimate
        assert br.lower == 0.0

    def test_level_mismatch(self):
        X = two_point(1.0)
        with pytest.raises(LevelMismatch):
            level_hausdorff(staircase_level(X, 1), staircase_level(X, 2), CFG)


class TestStaircaseDistance:
    def test_self_interval_contains_zero(self):
        X = two_point(1.0)
        sb = staircase_distance(X, X, 2, CFG)
        lo, hi = sb.interval
        assert lo == 0.0
        assert hi - lo <= sb.tail_bound + 1e-15

    def test_symmetry(self):
        X, Y = two_point(1.0), two_point(2.0)
        a = staircase_distance(X, Y, 2, CFG)
        b = staircase_distance(Y, X, 2, CFG)
        assert a.partial == b.partial and a.lower_partial == b.lower_partial

    def test_transfer_bound_small_pairs(self):
        rng = np.random.default_rng(11)
        for _ in range(6):
            X = dyadic_gds(rng, max_points=3, max_gens=2, span=2)
            Y = dyadic_gds(rng, max_points=3, max_gens=2, span=2)
            sb = staircase_distance(X, Y, 2, CFG)
            dc = gk.dconc_bracket(X, Y, CFG)
            assert sb.partial + sb.tail_bound <= dc.upper + sb.tail_bound + 1e-9

    def test_identity_family_tail_uses_magnitudes(self):
        X = gk.validate_gds([0, 1], [[0.0, 0.5]], gk.ID_FAMILY, [0.5, 0.5])
        sb = staircase_distance(X, X, 1, CFG)
        assert sb.tail_bound > 0
        # per-level cap is 2 * (mx + my) <= 2 at level N with magnitudes 0.5
        assert sb.tail_bound <= sum(series_weight(N) * 2.0 for N in range(2, 200)) + 1e-12


class TestMeasurementCoherence:
    def test_measurements_of_measurements(self):
        # level-M members of level-N members coincide with direct level-M
        # members, up to isomorphism (exhaustive, exact arithmetic)
        gens = np.array(
            [[0.0, 1.0, 2.0], [2.0, 0.0, 1.0], [0.5, 1.5, 0.0]]
        )
        X = gk.validate_gds(range(3), gens, gk.TB_FAMILY, [0.25, 0.25, 0.5])
        for M, N in ((1, 2), (1, 3), (2, 3)):
            direct = {
                canonical_form(m)
                for m in enumerate_measurements(X, M, float(M), 1000).members
            }
            via_n = set()
            for member in enumerate_measurements(X, N, float(N), 1000).members:
                for m2 in enumerate_measurements(member, M, float(M), 1000).members:
                    via_n.add(canonical_form(m2))
            assert direct == via_n


class TestLimitFormulaDeskScale:
    def test_od_bound_through_measurement_sets(self):
        # For a sequence X_n converging to X (certified by the coupling
        # upper bound), once the level-N measurement sets of X sit
        # within eps of those of X_n in box distance, the observable
        # diameter transfers with a 5 eps allowance. N is chosen from
        # the extraction estimate r / (1 - kappa).
        import math

        rng = np.random.default_rng(17)
        base = dyadic_gds(rng, max_points=3, max_gens=2, span=2)
        for step in (1, 2, 3):
            noise = rng.integers(-1, 2, size=base.generators.shape) / (64.0 * 2**step)
            Xn = gk.FiniteGDS(base.point_ids, base.generators + noise, base.family, base.mu)
            delta = gk.dconc_bracket(base, Xn, CFG).upper
            for kappa in (0.1, 0.25):
                for eps in (max(0.05, 2 * delta), 0.2):
                    if kappa + 2 * eps >= 1:
                        continue
                    r = gk.observable_diameter(Xn, kappa) + 5 * eps
                    N = math.ceil(r / (1 - (kappa + eps)) + eps)
                    a = staircase_level(base, N, budget=64)
                    b = staircase_level(Xn, N, budget=64)
                    assert a.exhaustive and b.exhaustive
                    br = level_hausdorff(a, b, CFG)
                    if br.upper <= eps:  # hypothesis numerically certified
                        lhs = gk.observable_diameter(base, kappa + 2 * eps)
                        rhs = gk.observable_diameter(Xn, kappa) + 5 * eps
                        assert lhs < rhs + 1e-12


class TestRho:
    def test_delegates_to_staircase(self):
        X, Y = two_point(1.0), two_point(2.0)
        a = rho_estimate(X, Y, 2, CFG)
        b = staircase_distance(X, Y, 2, CFG)
        assert a.partial == b.partial
        assert a.interval == b.interval

    def test_self_contains_zero(self):
        X = two_point(1.0)
        sb = rho_estimate(X, X, 2, CFG)
        assert sb.interval[0] == 0.0

    def test_rho_upper_vs_dconc_transfer(self):
        rng = np.random.default_rng(13)
        for _ in range(5):
            X = dyadic_gds(rng, max_points=3, max_gens=2, span=2)
            Y = dyadic_gds(rng, max_points=3, max_gens=2, span=2)
            sb = rho_estimate(X, Y, 2, CFG)
            dc = gk.dconc_bracket(X, Y, CFG)
            assert sb.partial <= dc.upper + sb.tail_bound + 1e-9
