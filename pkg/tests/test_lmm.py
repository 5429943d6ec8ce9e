import numpy as np
import pytest

from oracles import lmm_dense_loglik
from reverie.stats import (
    SingularDesign,
    TooFewGroups,
    fit_lmm_random_intercept,
    ols_fit,
    profile_loglik,
    simulate_vas_arrays,
)


def design_from(group, day):
    group = np.asarray(group, dtype=float)
    day = np.asarray(day, dtype=float)
    return np.column_stack([np.ones_like(day), group, day, group * day])


class TestProfileLikelihood:
    def test_matches_dense_oracle_across_theta(self):
        rng = np.random.default_rng(0)
        subjects, group, day, y = simulate_vas_arrays(rng, n_per_group=5, days=6)
        X = design_from(group, day)
        for theta in (1e-6, 0.01, 0.3, 1.0, 4.0, 50.0):
            fast = profile_loglik(theta, subjects, X, y)
            dense = lmm_dense_loglik(theta, subjects, X, y)
            assert fast == pytest.approx(dense, abs=1e-8)

    def test_unbalanced_blocks_match_oracle(self):
        rng = np.random.default_rng(1)
        subjects, group, day, y = simulate_vas_arrays(rng, n_per_group=4, days=8)
        keep = rng.random(len(y)) > 0.3  # drop days at random
        subjects = [s for s, k in zip(subjects, keep) if k]
        group, day, y = group[keep], day[keep], y[keep]
        X = design_from(group, day)
        for theta in (0.05, 1.0, 20.0):
            assert profile_loglik(theta, subjects, X, y) == pytest.approx(
                lmm_dense_loglik(theta, subjects, X, y), abs=1e-8
            )


class TestFit:
    def test_optimum_beats_theta_grid(self):
        rng = np.random.default_rng(2)
        subjects, group, day, y = simulate_vas_arrays(rng, n_per_group=8, days=10)
        X = design_from(group, day)
        fit = fit_lmm_random_intercept(subjects, group, day, y)
        grid = np.exp(np.linspace(np.log(1e-8), np.log(1e4), 500))
        grid_best = max(profile_loglik(t, subjects, X, y) for t in grid)
        assert fit.log_likelihood >= grid_best - 1e-6

    def test_zero_random_intercept_degenerates_to_ols(self):
        rng = np.random.default_rng(3)
        subjects, group, day, y = simulate_vas_arrays(
            rng, n_per_group=8, days=10, sigma_u=0.0
        )
        X = design_from(group, day)
        lmm = fit_lmm_random_intercept(subjects, group, day, y)
        ols = ols_fit(X, y, names=lmm.names)
        assert np.allclose(lmm.coefficients, ols.coefficients, atol=1e-6)
        assert lmm.variance_components["sigma2_u"] < 1e-3

    def test_recovers_known_parameters(self):
        betas = (8.4, 0.1, -0.13, -0.12)
        rng = np.random.default_rng(4)
        subjects, group, day, y = simulate_vas_arrays(
            rng, n_per_group=10, days=14, betas=betas, sigma_u=0.5, sigma_e=0.4
        )
        fit = fit_lmm_random_intercept(subjects, group, day, y)
        for estimate, truth, se in zip(
            fit.coefficients, betas, fit.standard_errors
        ):
            assert abs(estimate - truth) < 3 * se
        assert fit.p_value("group_x_day") < 0.05
        assert fit.coef("group_x_day") < 0
        vc = fit.variance_components
        assert vc["sigma2_u"] == pytest.approx(0.25, abs=0.25)
        assert vc["sigma2_e"] == pytest.approx(0.16, abs=0.05)

    def test_estimated_random_variance_shrinks_without_subject_effects(self):
        rng = np.random.default_rng(5)
        subjects, group, day, y = simulate_vas_arrays(
            rng, n_per_group=100, days=6, sigma_u=0.0, sigma_e=0.4
        )
        fit = fit_lmm_random_intercept(subjects, group, day, y)
        assert fit.variance_components["sigma2_u"] < 0.01

    def test_missing_days_tolerated(self):
        rng = np.random.default_rng(6)
        subjects, group, day, y = simulate_vas_arrays(rng, n_per_group=10, days=14)
        keep = rng.random(len(y)) > 0.25
        fit = fit_lmm_random_intercept(
            [s for s, k in zip(subjects, keep) if k],
            np.asarray(group)[keep],
            np.asarray(day)[keep],
            np.asarray(y)[keep],
        )
        assert fit.coef("group_x_day") < 0

    def test_single_subject_rejected(self):
        with pytest.raises(TooFewGroups):
            fit_lmm_random_intercept(
                ["a"] * 6, [1] * 6, [1, 2, 3, 4, 5, 6], [5, 4, 4, 3, 3, 2]
            )

    def test_single_group_is_singular(self):
        rng = np.random.default_rng(7)
        subjects = ["a"] * 5 + ["b"] * 5
        day = list(range(1, 6)) * 2
        y = rng.normal(size=10)
        with pytest.raises(SingularDesign):
            fit_lmm_random_intercept(subjects, [1.0] * 10, day, y)

    def test_wald_output_is_labelled_normal_approximation(self):
        rng = np.random.default_rng(8)
        subjects, group, day, y = simulate_vas_arrays(rng, n_per_group=5, days=6)
        fit = fit_lmm_random_intercept(subjects, group, day, y)
        assert "normal" in fit.dof_method
        assert fit.dof is None
