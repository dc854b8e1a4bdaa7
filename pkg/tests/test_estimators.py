import math

import numpy as np
import pytest

from orlicz_polytope.bodies import (
    BodySpec,
    Direction,
    circumradius,
    coordinate_marginal,
    derive_seed,
    normalization_scale,
    sample_sphere,
    support_function,
)
from orlicz_polytope.errors import DomainError, HypothesisError
from orlicz_polytope.estimators import (
    PolytopeExperiment,
    check_profile_hypotheses,
    direction_measure_scan,
    direction_support_profile,
    expected_support_mc,
    expected_support_orlicz,
    general_upper_bound,
    mean_width_mc,
    mean_width_orlicz,
    scaling_fit,
    solve_tilde_s,
    sphere_average_m,
    _mean_width_trial,
    _spherical_values,
)
from orlicz_polytope.orlicz import m_pball_first, m_spherical

INF = math.inf


def cube_inversion_formula(N):
    return (1.0 + 1.0 / N - math.sqrt(2.0 / N + 1.0 / N**2)) / 2.0


class TestExpectedSupportOrlicz:
    def test_cube_formula(self):
        got = expected_support_orlicz(BodySpec(INF, 10), 0, 2)
        assert got == pytest.approx(cube_inversion_formula(2), rel=1e-8)

    def test_ball_direction_invariance(self):
        body = BodySpec(2.0, 6)
        rng = np.random.default_rng(4)
        base = expected_support_orlicz(body, 0, 50)
        for _ in range(20):
            theta = Direction.from_vector(rng.normal(size=6))
            assert expected_support_orlicz(body, theta, 50) == pytest.approx(base, rel=1e-9)

    def test_log_growth_for_crosspolytope(self):
        body = BodySpec(1.0, 20)
        v3 = expected_support_orlicz(body, 0, 10**3)
        v6 = expected_support_orlicz(body, 0, 10**6)
        assert v6 / v3 == pytest.approx(2.0, rel=0.25)

    def test_empirical_direction_path(self):
        # non-canonical direction on the cube goes through the histogram route
        body = BodySpec(INF, 4)
        theta = Direction.from_vector(np.ones(4))
        got = expected_support_orlicz(body, theta, 100, proj_samples=10**5, seed=8)
        assert 0 < got <= support_function(body, theta)


class TestExpectedSupportMC:
    def test_interval_order_statistics(self):
        # E max of 3 uniform |coords| on [0, 1/2] is (3/4)(1/2) = 0.375
        exp = PolytopeExperiment(BodySpec(INF, 1), 3, 0, mc_trials=10**4, seed=42)
        rep = expected_support_mc(exp)
        lo, hi = rep.mc_ci95
        assert lo <= 0.375 <= hi
        assert rep.ratio is not None and rep.ratio > 0

    def test_cube_coordinate_independence(self):
        # same per-coordinate law in any dimension (N < n is fine here)
        with pytest.warns(UserWarning):
            exp = PolytopeExperiment(BodySpec(INF, 7), 3, 2, mc_trials=4000, seed=43)
        rep = expected_support_mc(exp)
        assert rep.mc_mean == pytest.approx(0.375, abs=4 * (rep.mc_ci95[1] - rep.mc_mean) / 1.96 + 0.003)

    def test_bounded_by_support(self):
        for p in (1.0, 2.0, INF):
            body = BodySpec(p, 5)
            exp = PolytopeExperiment(body, 200, 0, mc_trials=50, seed=7)
            rep = expected_support_mc(exp)
            assert rep.mc_mean <= support_function(body, Direction.canonical(5, 0)) + 1e-12

    def test_monotone_in_N_with_shared_seed(self):
        from orlicz_polytope.estimators import _support_trial

        body = BodySpec(2.0, 4)
        theta = Direction.canonical(4, 0)
        for trial in range(5):
            small = _support_trial((2.0, 4, True, 100, theta.coords, 11, trial))
            large = _support_trial((2.0, 4, True, 400, theta.coords, 11, trial))
            assert large >= small

    def test_parallel_matches_serial(self):
        exp = PolytopeExperiment(BodySpec(1.0, 3), 50, 0, mc_trials=12, seed=3)
        a = expected_support_mc(exp, threads=1, orlicz_value=1.0)
        b = expected_support_mc(exp, threads=3, orlicz_value=1.0)
        assert a.mc_mean == b.mc_mean
        assert a.mc_ci95 == b.mc_ci95

    def test_warns_below_dimension(self):
        with pytest.warns(UserWarning):
            PolytopeExperiment(BodySpec(2.0, 10), 5, 0, mc_trials=30, seed=0)


class TestMeanWidth:
    def test_ball_equals_single_direction(self):
        body = BodySpec(2.0, 8)
        assert mean_width_orlicz(body, 500) == expected_support_orlicz(body, 0, 500)

    def test_ball_sqrt_log_ratio(self):
        # doubling log N multiplies the mean width by about sqrt(log ratio)
        body = BodySpec(2.0, 30)
        ratio = mean_width_orlicz(body, 10**5) / mean_width_orlicz(body, 10**2)
        assert ratio == pytest.approx(math.sqrt(5.0 / 2.0), rel=0.2)

    def test_average_between_extremes(self):
        body = BodySpec(INF, 2)
        dirs = sample_sphere(2, 100, derive_seed(12, "mw-dirs"))
        values = direction_support_profile(body, dirs, 50, seed=12, proj_samples=10**5)
        avg = mean_width_orlicz(body, 50, n_dirs=100, seed=12, proj_samples=10**5)
        assert values.min() <= avg <= values.max()

    def test_requires_enough_directions(self):
        with pytest.raises(DomainError):
            mean_width_orlicz(BodySpec(1.0, 3), 100, n_dirs=10)

    def test_direction_average_stderr_shrinks(self):
        from orlicz_polytope.estimators import mean_width_orlicz_report

        body = BodySpec(INF, 2)
        small = mean_width_orlicz_report(body, 50, n_dirs=100, seed=1, proj_samples=3 * 10**4)
        large = mean_width_orlicz_report(body, 50, n_dirs=400, seed=1, proj_samples=3 * 10**4)
        assert large.stderr < small.stderr
        # quadrupling the directions roughly halves the standard error
        assert large.stderr == pytest.approx(small.stderr / 2.0, rel=0.5)
        assert abs(large.value - small.value) <= 4 * (small.stderr + large.stderr)

    def test_polytope_monotone_in_N(self):
        # shared streams make the N' > N polytope contain the N one
        for trial in range(4):
            small = _mean_width_trial((2.0, 2, True, 100, 64, 5, trial))
            large = _mean_width_trial((2.0, 2, True, 300, 64, 5, trial))
            assert large >= small

    def test_disk_saturation(self):
        # N = 1e4 points nearly fill the disk
        body = BodySpec(2.0, 2)
        rep = mean_width_mc(body, 10**4, trials=200, n_dirs=64, seed=9)
        target = support_function(body, Direction.canonical(2, 0))
        assert rep.mc_mean == pytest.approx(target, rel=0.05)
        est = mean_width_orlicz(body, 10**4)
        assert 0.05 <= rep.mc_mean / est <= 20.0


class TestSphereAverage:
    def test_zero_beyond_circumradius(self):
        body = BodySpec(2.0, 5)
        out = sphere_average_m(body, circumradius(body) * 1.01, 20000, 3)
        assert out.value == 0.0

    def test_ball_identity(self):
        body = BodySpec(2.0, 10)
        s = 0.45 * normalization_scale(body)
        out = sphere_average_m(body, s, 4 * 10**5, 17)
        closed = m_pball_first(2.0, 10, s)
        assert abs(out.value - closed) <= 3 * out.stderr

    def test_minimizer_among_bodies(self):
        s = 0.5 * normalization_scale(BodySpec(2.0, 10))
        ball = sphere_average_m(BodySpec(2.0, 10), s, 2 * 10**5, 23)
        for p in (1.0, 4.0):
            other = sphere_average_m(BodySpec(p, 10), s, 2 * 10**5, 29)
            assert other.value >= ball.value - 3 * (other.stderr + ball.stderr)

    def test_batch_matches_scalar_quadrature(self):
        norms = np.array([0.4, 1.1, 1.7, 2.5, 9.0])
        got = _spherical_values(6, norms, 1.0)
        want = np.array([m_spherical(6, float(x)) if x > 1 else 0.0 for x in norms])
        assert got == pytest.approx(want, rel=1e-9, abs=1e-15)


class TestTildeS:
    def test_monotone_in_N(self):
        body = BodySpec(2.0, 5)
        s_small = solve_tilde_s(body, 100, 50000, 3)
        s_large = solve_tilde_s(body, 10**4, 50000, 3)
        assert s_large > s_small

    def test_bounded_by_circumradius(self):
        body = BodySpec(1.0, 6)
        st = solve_tilde_s(body, 1000, 50000, 5)
        assert 0 < st <= circumradius(body)

    def test_crossing_level(self):
        from orlicz_polytope.bodies import sample_norms

        body = BodySpec(2.0, 8)
        N = 500
        st = solve_tilde_s(body, N, 10**5, 7)
        # evaluate the frozen-cloud objective at the returned scale
        norms = sample_norms(body, 10**5, derive_seed(7, "tilde-s"))
        value = float(_spherical_values(body.n, norms, st).mean())
        assert value == pytest.approx(1.0 / N, rel=1e-4)


class TestGeneralUpperBound:
    def test_zero_log_limit(self):
        marg = coordinate_marginal(BodySpec(3.0, 20))
        assert general_upper_bound(marg, 1) == 0.0

    def test_flat_profile_rejected(self):
        marg = coordinate_marginal(BodySpec(INF, 10))
        with pytest.raises(HypothesisError) as err:
            general_upper_bound(marg, 8, alpha=4.0)
        assert "h'" in err.value.hypothesis

    def test_alpha_domain(self):
        marg = coordinate_marginal(BodySpec(3.0, 10))
        with pytest.raises(DomainError):
            general_upper_bound(marg, 100, alpha=4.0)  # 4 log 100 > 10

    def test_small_p_fails_monotonicity(self):
        marg = coordinate_marginal(BodySpec(1.2, 12))
        with pytest.raises(HypothesisError):
            check_profile_hypotheses(marg)

    def test_tracks_mc_oracle(self):
        body = BodySpec(3.0, 50)
        marg = coordinate_marginal(body)
        bound = general_upper_bound(marg, 1000, alpha=4.0)
        rep = expected_support_mc(PolytopeExperiment(body, 1000, 0, mc_trials=40, seed=2))
        assert 0 < bound <= normalization_scale(body)
        # the theorem's inequality holds up to an absolute constant
        assert rep.mc_mean / bound < 10.0


class TestDirectionScan:
    def test_partition_and_invariance(self):
        scan = direction_measure_scan(BodySpec(2.0, 6), 100, r=1.0, n_dirs=1000, seed=5)
        total = scan.fraction_below_lower + scan.fraction_between + scan.fraction_above_upper
        assert total == pytest.approx(1.0, abs=1e-12)
        assert scan.fraction_upper in (0.0, 1.0)
        assert np.unique(scan.estimates).size == 1

    def test_crosspolytope_upper_fraction(self):
        scan = direction_measure_scan(BodySpec(1.0, 15), 10**3, r=1.0, n_dirs=1000, seed=6, proj_samples=3 * 10**4)
        assert scan.fraction_upper >= 0.9
        assert 0.0 <= scan.predicted_upper_measure <= 1.0

    def test_requires_directions(self):
        with pytest.raises(DomainError):
            direction_measure_scan(BodySpec(1.0, 5), 100, r=1.0, n_dirs=10)


class TestScalingFit:
    def test_exact_power_law(self):
        rows = [(N, math.log(N) ** (1.0 / 3.0)) for N in (10, 100, 1000, 10**4, 10**5)]
        slope, r2 = scaling_fit(rows, "log-log-N")
        assert slope == pytest.approx(1.0 / 3.0, abs=1e-10)
        assert r2 == pytest.approx(1.0, abs=1e-12)

    def test_constant_input(self):
        rows = [(N, 2.5) for N in (10, 100, 1000, 10**4)]
        slope, r2 = scaling_fit(rows, "log-log-N")
        assert slope == pytest.approx(0.0, abs=1e-12)
        assert r2 == 1.0

    def test_mean_width_transform(self):
        rows = [(N, math.sqrt(3.0 * math.log(N) + 1.0)) for N in (10, 100, 1000, 10**4)]
        slope, r2 = scaling_fit(rows, "log-N")
        assert slope == pytest.approx(3.0, rel=1e-10)
        assert r2 == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_inputs(self):
        with pytest.raises(DomainError):
            scaling_fit([(10, 1.0), (10, 2.0), (10, 3.0), (10, 4.0)])
        with pytest.raises(DomainError):
            scaling_fit([(10, 1.0), (100, 2.0)])
        with pytest.raises(DomainError):
            scaling_fit([(10, 1.0), (100, 2.0), (1000, 3.0), (10**4, -1.0)], "log-log-N")


class TestTwoSidedEquivalence:
    def test_ratio_band_over_grid(self):
        ratios = []
        for p in (1.0, 2.0, 4.0, INF):
            for n in (5, 20, 50):
                body = BodySpec(p, n)
                for N in (100, 1000, 10**4):
                    est = expected_support_orlicz(body, 0, N)
                    rep = expected_support_mc(
                        PolytopeExperiment(body, N, 0, mc_trials=50, seed=31),
                        orlicz_value=est,
                    )
                    ratios.append(rep.ratio)
                    assert est <= support_function(body, Direction.canonical(n, 0)) * (1 + 1e-9)
                    assert rep.mc_mean <= support_function(body, Direction.canonical(n, 0)) + 1e-12
        ratios = np.array(ratios)
        assert np.all(ratios >= 0.05) and np.all(ratios <= 20.0)
        assert ratios.max() / ratios.min() < 100.0
