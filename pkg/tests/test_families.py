import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import gdskit as gk
from gdskit.errors import EmptySet, InvalidRange
from gdskit.families import _min_window
from oracles import (
    clip_orbit_grid_oracle,
    dyadic_gds,
    dyadic_masses,
    dyadic_measure,
    dyadic_values,
    exact_capacity_oracle,
    exact_cover_oracle,
    kf_oracle,
    random_clip,
    shiftclip_grid_oracle,
    t_orbit_grid_oracle,
)


class TestClipMap:
    def test_identity(self):
        assert gk.clip_apply(gk.ClipMap.identity(), [0.0, 3.0]).tolist() == [0.0, 3.0]

    def test_bound(self):
        assert gk.clip_apply(gk.ClipMap.bound(1.0), [0.0, 3.0]).tolist() == [0.0, 1.0]

    def test_shift_then_floor(self):
        p = gk.ClipMap(c=-2.0, lo=0.0, hi=math.inf)
        assert gk.clip_apply(p, [0.0, 3.0]).tolist() == [0.0, 1.0]

    def test_one_lipschitz_exact(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            p = random_clip(rng)
            x, y = dyadic_values(rng, 2)
            assert abs(p.apply([x])[0] - p.apply([y])[0]) <= abs(x - y)

    def test_spread_never_grows(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            p = random_clip(rng)
            vals = dyadic_values(rng, 6)
            out = p.apply(vals)
            assert out.max() - out.min() <= vals.max() - vals.min()

    _dyadic = st.integers(-256, 256).map(lambda k: k / 16.0)
    _clip = st.builds(
        lambda c, a, b: gk.ClipMap(c, min(a, b), max(a, b)),
        _dyadic,
        st.one_of(st.just(-math.inf), _dyadic),
        st.one_of(_dyadic, st.just(math.inf)),
    )

    @given(_clip, _clip, st.lists(_dyadic, min_size=1, max_size=8))
    @settings(max_examples=200, deadline=None)
    def test_monoid_closure_pointwise(self, outer, inner, vals):
        combined = gk.compose_clips(outer, inner)
        vals = np.array(vals)
        assert np.array_equal(combined.apply(vals), outer.apply(inner.apply(vals)))

    def test_json_round_trip(self):
        for p in (gk.ClipMap.identity(), gk.ClipMap.bound(2.0), gk.ClipMap(1.5, -0.5, math.inf)):
            assert gk.ClipMap.from_json(p.to_json()) == p

    def test_invalid_bounds(self):
        with pytest.raises(InvalidRange):
            gk.ClipMap(0.0, 1.0, 0.0)


class TestComposeFamily:
    def test_identity_keeps_points(self):
        rng = np.random.default_rng(11)
        X = dyadic_gds(rng)
        Y = gk.compose_family(X, gk.ClipMap.identity())
        assert Y.n_points == X.n_points
        assert np.array_equal(Y.generators, X.generators)

    def test_clip_keeps_distinct_points(self):
        X = gk.validate_gds([0, 1], [[0.0, 3.0]], gk.TB_FAMILY, [0.5, 0.5])
        Y = gk.compose_family(X, gk.ClipMap.bound(1.0))
        assert Y.n_points == 2
        assert Y.generators.tolist() == [[0.0, 1.0]]

    def test_constant_collapses(self):
        X = gk.validate_gds([0, 1], [[0.0, 3.0]], gk.TB_FAMILY, [0.5, 0.5])
        Y = gk.compose_family(X, gk.ClipMap.constant(0.0))
        assert Y.n_points == 1
        assert Y.masses.tolist() == [1.0]

    def test_mass_preserved_and_od_never_grows(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            X = dyadic_gds(rng)
            p = random_clip(rng)
            Y = gk.compose_family(X, p)
            assert abs(float(Y.masses.sum()) - 1.0) <= 1e-12
            for kappa in (0.1, 0.35, 0.6):
                assert gk.observable_diameter(Y, kappa) <= gk.observable_diameter(X, kappa)


class TestDistToOrbit:
    def test_same_feature_any_family(self):
        rng = np.random.default_rng(17)
        f = dyadic_values(rng, 5)
        pv = gk.ProbVector(dyadic_masses(rng, 5))
        for family in (gk.ID_FAMILY, gk.T_FAMILY, gk.B_FAMILY, gk.TB_FAMILY):
            res = gk.dist_to_orbit(f, f, family, pv)
            assert res.value == 0.0

    def test_exact_shift_alignment(self):
        pv = gk.ProbVector.uniform(3)
        res = gk.dist_to_orbit([5.0, 6.0, 7.0], [0.0, 1.0, 2.0], gk.T_FAMILY, pv)
        assert res.value == 0.0
        assert res.witness.c == 5.0
        assert res.certified

    def test_clip_alignment(self):
        pv = gk.ProbVector.uniform(3)
        g = np.array([-3.0, 0.5, 2.0])
        f = np.clip(g, -1.0, 1.0)
        res = gk.dist_to_orbit(f, g, gk.B_FAMILY, pv)
        assert res.value == 0.0
        assert res.witness.hi == 1.0

    def test_translation_matches_grid_oracle(self):
        rng = np.random.default_rng(19)
        for _ in range(15):
            n = int(rng.integers(2, 6))
            f, g = dyadic_values(rng, n, span=2), dyadic_values(rng, n, span=2)
            w = dyadic_masses(rng, n, denom_pow=4)
            exact = gk.dist_to_orbit(f, g, gk.T_FAMILY, gk.ProbVector(w)).value
            grid = t_orbit_grid_oracle(f, g, w)
            assert exact <= grid + 1e-12

    def test_clip_matches_grid_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            f, g = dyadic_values(rng, n, span=2), dyadic_values(rng, n, span=2)
            w = dyadic_masses(rng, n, denom_pow=4)
            exact = gk.dist_to_orbit(f, g, gk.B_FAMILY, gk.ProbVector(w)).value
            grid = clip_orbit_grid_oracle(f, g, w)
            assert exact <= grid + 1e-12

    def test_shiftclip_below_translation_and_grid(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            f, g = dyadic_values(rng, n, span=2), dyadic_values(rng, n, span=2)
            pv = gk.ProbVector(dyadic_masses(rng, n, denom_pow=4))
            tb = gk.dist_to_orbit(f, g, gk.TB_FAMILY, pv).value
            t = gk.dist_to_orbit(f, g, gk.T_FAMILY, pv).value
            ident = gk.dist_to_orbit(f, g, gk.ID_FAMILY, pv).value
            assert tb <= t <= ident
            grid_val, resolution = shiftclip_grid_oracle(f, g, pv.weights)
            assert tb <= grid_val + resolution + 1e-12

    def test_witness_reproduces_value(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            n = int(rng.integers(2, 6))
            f, g = dyadic_values(rng, n), dyadic_values(rng, n)
            w = dyadic_masses(rng, n)
            pv = gk.ProbVector(w)
            for family in (gk.ID_FAMILY, gk.T_FAMILY, gk.B_FAMILY, gk.TB_FAMILY,
                           gk.FamilyTag("lip1", 16)):
                res = gk.dist_to_orbit(f, g, family, pv)
                achieved = kf_oracle(f, res.witness.apply(g), w)
                assert achieved <= res.value + 1e-9

    def test_lip1_no_worse_than_shiftclip(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            f, g = dyadic_values(rng, n), dyadic_values(rng, n)
            pv = gk.ProbVector(dyadic_masses(rng, n))
            tb = gk.dist_to_orbit(f, g, gk.TB_FAMILY, pv).value
            lip = gk.dist_to_orbit(f, g, gk.FamilyTag("lip1", 32), pv).value
            assert lip <= tb + 1e-12
            assert not gk.dist_to_orbit(f, g, gk.FamilyTag("lip1", 32), pv).certified


class TestSupOrbit:
    def test_translation_midrange(self):
        res = gk.dist_to_orbit_sup([0.0, 4.0], [0.0, 0.0], gk.T_FAMILY)
        assert res.value == 2.0

    def test_identity(self):
        res = gk.dist_to_orbit_sup([0.0, 4.0], [1.0, 1.0], gk.ID_FAMILY)
        assert res.value == 3.0

    def test_clip_reaches_zero(self):
        g = np.array([-5.0, 1.0, 6.0])
        f = np.clip(g, -2.0, 2.0)
        assert gk.dist_to_orbit_sup(f, g, gk.B_FAMILY).value == 0.0

    def test_witness_reproduces_value(self):
        rng = np.random.default_rng(41)
        for _ in range(25):
            n = int(rng.integers(2, 6))
            f, g = dyadic_values(rng, n), dyadic_values(rng, n)
            for family in (gk.ID_FAMILY, gk.T_FAMILY, gk.B_FAMILY, gk.TB_FAMILY):
                res = gk.dist_to_orbit_sup(f, g, family)
                achieved = float(np.max(np.abs(f - res.witness.apply(g))))
                assert achieved <= res.value + 1e-9


class TestCovering:
    def test_single_orbit_is_one(self):
        # generators all translates of one feature
        base = np.array([0.0, 1.0, 2.5])
        gens = np.vstack([base, base + 2.0, base - 1.5])
        X = gk.validate_gds([0, 1, 2], gens, gk.T_FAMILY, [0.25, 0.25, 0.5])
        res = gk.covering_number(X, 0.05)
        assert res.value == 1 and res.exact

    def test_one_point_constants_under_translations(self):
        X = gk.validate_gds(["p"], [[3.0], [5.0], [-2.0]], gk.T_FAMILY, [1.0])
        for eps in (0.01, 0.1, 1.0):
            res = gk.covering_number(X, eps)
            assert res.value == 1 and res.exact

    def test_two_inequivalent_generators(self):
        # a spread feature and a non-monotone shuffle of it sit at
        # positive shift-clip orbit distance in both directions
        gens = np.array([[0.0, 1.0, 2.0, 3.0], [2.0, 3.0, 0.0, 1.0]])
        X = gk.validate_gds(range(4), gens, gk.TB_FAMILY, [0.25] * 4)
        from gdskit.families import directed_orbit_matrix

        d = directed_orbit_matrix(X.generators, X.family, X.mu)
        assert d[0, 1] > 0.1 and d[1, 0] > 0.1
        res = gk.covering_number(X, 0.1)
        assert res.exact
        assert res.value == exact_cover_oracle(d < 0.1)
        assert res.value == 2

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            X = dyadic_gds(rng, max_points=5, max_gens=4)
            eps = 0.37
            from gdskit.families import directed_orbit_matrix

            d = directed_orbit_matrix(X.generators, X.family, X.mu)
            res = gk.covering_number(X, eps)
            assert res.exact
            assert res.value == exact_cover_oracle(d < eps)

    def test_covering_transfer_under_small_dconc(self):
        # cov(X, eps) <= cov(Y, eps - 2 delta) when dconc(X, Y) < delta
        rng = np.random.default_rng(47)
        for _ in range(8):
            X = dyadic_gds(rng, max_points=4, max_gens=3, family=gk.T_FAMILY)
            shift = 1.0 / 64.0
            gens = X.generators.copy()
            gens[0] = gens[0] + shift  # a translate: stays in the T orbit
            Y = gk.FiniteGDS(X.point_ids, gens, X.family, X.mu)
            delta = gk.dconc_bracket(X, Y).upper + 1e-9
            for eps in (0.4, 0.6):
                if eps - 2 * delta <= 0:
                    continue
                cx = gk.covering_number(X, eps)
                cy = gk.covering_number(Y, eps - 2 * delta)
                assert cx.exact and cy.exact
                assert cx.value <= cy.value


class TestCapacity:
    def test_single_rep(self):
        res = gk.capacity([[0.0, 1.0]], 0.1, gk.TB_FAMILY, gk.ProbVector.uniform(2))
        assert res.value == 1

    def test_same_orbit_collapses(self):
        base = np.array([0.0, 1.0, 2.5])
        reps = np.vstack([base, base + 2.0, base - 1.0])
        res = gk.capacity(reps, 0.05, gk.T_FAMILY, gk.ProbVector.uniform(3))
        assert res.value == 1 and res.exact

    def test_constructed_discrete_family(self):
        # features with pairwise symmetric orbit distance 0.5 under TB
        reps = np.array([
            [0.0, 1.0, 2.0, 3.0],
            [2.0, 3.0, 0.0, 1.0],
            [1.0, 0.0, 3.0, 2.0],
        ])
        mu = gk.ProbVector.uniform(4)
        from gdskit.families import symmetric_orbit_matrix

        s = symmetric_orbit_matrix(reps, gk.TB_FAMILY, mu)
        eps = 0.9 * s[np.triu_indices(3, 1)].min()
        res = gk.capacity(reps, eps, gk.TB_FAMILY, mu)
        assert res.exact
        assert res.value == 3

    def test_cov_le_capa_when_both_exact(self):
        rng = np.random.default_rng(53)
        for _ in range(10):
            X = dyadic_gds(rng, max_points=5, max_gens=4)
            eps = 0.23
            cov = gk.covering_number(X, eps)
            capa = gk.capacity(X.generators, eps, X.family, X.mu)
            assert cov.exact and capa.exact
            assert cov.value <= capa.value
            from gdskit.families import symmetric_orbit_matrix

            s = symmetric_orbit_matrix(X.generators, X.family, X.mu)
            assert capa.value == exact_capacity_oracle(s, eps)

    def test_empty_rejected(self):
        with pytest.raises(EmptySet):
            gk.capacity(np.zeros((0, 3)), 0.1, gk.TB_FAMILY, gk.ProbVector.uniform(3))


class TestExtractBounded:
    def test_point_mass(self):
        g, achieved = gk.extract_bounded(gk.DiscreteMeasureR.point_mass(4.0), 0.3, 0.1, 2.0)
        assert g.c == -4.0
        assert achieved == 0.0

    def test_two_atoms_clip_inactive(self):
        mu = gk.DiscreteMeasureR(np.array([0.0, 7.0]), np.array([0.5, 0.5]))
        g, achieved = gk.extract_bounded(mu, 1 / 3, 0.1, 10.0)
        assert achieved == 7.0

    def test_two_atoms_clip_active(self):
        mu = gk.DiscreteMeasureR(np.array([0.0, 7.0]), np.array([0.5, 0.5]))
        g, achieved = gk.extract_bounded(mu, 1 / 3, 0.1, 1.0)
        assert achieved == 1.0
        assert np.all(np.abs(g.apply(mu.values)) <= 1.0)

    def test_guarantee_on_random_measures(self):
        rng = np.random.default_rng(59)
        for _ in range(200):
            mu = dyadic_measure(rng)
            kappa = float(rng.uniform(0.02, 0.46))
            eps = float(rng.uniform(0.01, 0.49 - kappa))
            r = float(rng.uniform(0.25, 10.0))
            g, achieved = gk.extract_bounded(mu, kappa, eps, r)
            target = min(r, gk.partial_diameter(mu, 1 - (kappa + eps)))
            assert target <= achieved + 2 * eps + 1e-12
            assert np.all(np.abs(g.apply(mu.values)) <= r)

    def test_invalid_ranges(self):
        mu = gk.DiscreteMeasureR.point_mass(0.0)
        with pytest.raises(InvalidRange):
            gk.extract_bounded(mu, 0.6, 0.1, 1.0)
        with pytest.raises(InvalidRange):
            gk.extract_bounded(mu, 0.3, 0.25, 1.0)
        with pytest.raises(InvalidRange):
            gk.extract_bounded(mu, 0.3, 0.1, 0.0)


class TestExtractHeuristic:
    def test_window_centering_any_kappa(self):
        mu = gk.DiscreteMeasureR(np.array([0.0, 10.0, 10.5]), np.array([0.25, 0.5, 0.25]))
        g, achieved = gk.extract_window_heuristic(mu, 0.6, 5.0)
        # the 0.4-mass window [10, 10.5] gets centered and survives the clip
        assert achieved <= gk.partial_diameter(mu, 0.4) + 1e-12

    def test_min_window_endpoints(self):
        mu = gk.DiscreteMeasureR(np.array([0.0, 1.0, 5.0]), np.array([0.25, 0.5, 0.25]))
        width, left, right = _min_window(mu, 0.7)
        assert (left, right) == (0.0, 1.0)
        assert width == 1.0
