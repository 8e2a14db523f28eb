import numpy as np
import pytest

from aegis.acquisition import (
    OptimiserConfig,
    ei_select,
    expected_improvement,
    expected_improvement_grad,
    exploit,
    optimize_objective,
)
from aegis.exceptions import NumericalError


def test_ei_matches_monte_carlo(rng):
    """Closed form vs 10^6-sample Monte Carlo of E[max(f* - Y, 0)]."""
    draws = rng.standard_normal(1_000_000)
    for mu, sigma, f_best in [(0.0, 1.0, 0.5), (1.2, 0.3, 1.0), (-2.0, 2.5, 0.0)]:
        mc = np.mean(np.maximum(f_best - (mu + sigma * draws), 0.0))
        assert expected_improvement(mu, sigma, f_best) == pytest.approx(mc, abs=1e-2)


def test_ei_zero_sigma_limit():
    assert expected_improvement(2.0, 0.0, 1.0) == 0.0
    assert expected_improvement(0.5, 0.0, 1.0) == pytest.approx(0.5)


def test_ei_properties():
    assert expected_improvement(0.0, 1.0, -10.0) >= 0.0
    # EI increases with sigma at fixed mean.
    lo = expected_improvement(0.0, 0.5, 0.0)
    hi = expected_improvement(0.0, 2.0, 0.0)
    assert hi > lo
    # Vectorised input.
    out = expected_improvement(np.zeros(4), np.ones(4), 1.0)
    assert out.shape == (4,)


def test_ei_grad_matches_finite_differences(rng, small_model):
    f_best = float(np.min(small_model.y))
    h = 1e-6
    for _ in range(5):
        x = rng.uniform(0.1, 0.9, size=small_model.d)
        mu, var, dmu, dvar = small_model.posterior_with_grad(x)
        sigma = np.sqrt(var)
        grad = expected_improvement_grad(mu, sigma, f_best, dmu, dvar)

        def ei_at(xq):
            m, v = small_model.posterior(xq)
            return expected_improvement(m, np.sqrt(v), f_best)

        for j in range(small_model.d):
            e = np.zeros(small_model.d)
            e[j] = h
            fd = (ei_at(x + e) - ei_at(x - e)) / (2 * h)
            assert grad[j] == pytest.approx(fd, abs=1e-5)


def test_optimizer_finds_quadratic_minimum(rng):
    target = np.array([0.3, 0.7])

    def batch(Xs):
        return np.sum((Xs - target) ** 2, axis=1)

    def vag(x):
        return float(np.sum((x - target) ** 2)), 2.0 * (x - target)

    x = optimize_objective(batch, vag, 2, rng, OptimiserConfig(n_samples=200))
    np.testing.assert_allclose(x, target, atol=1e-5)


def test_optimizer_respects_bounds_for_exterior_minimum(rng):
    target = np.array([1.5])

    def batch(Xs):
        return np.sum((Xs - target) ** 2, axis=1)

    def vag(x):
        return float(np.sum((x - target) ** 2)), 2.0 * (x - target)

    x = optimize_objective(batch, vag, 1, rng, OptimiserConfig(n_samples=100))
    assert x[0] == pytest.approx(1.0, abs=1e-9)


def test_optimizer_maximise_orientation(rng):
    def batch(Xs):
        return -np.sum((Xs - 0.5) ** 2, axis=1)

    def vag(x):
        return float(-np.sum((x - 0.5) ** 2)), -2.0 * (x - 0.5)

    x = optimize_objective(batch, vag, 2, rng, OptimiserConfig(n_samples=150),
                           minimise=False)
    np.testing.assert_allclose(x, 0.5, atol=1e-5)


def test_optimizer_default_sampling_budget():
    assert OptimiserConfig().samples_for(7) == 7000
    assert OptimiserConfig(n_samples=50).samples_for(7) == 50


def test_optimizer_rejects_non_finite(rng):
    def batch(Xs):
        return np.full(len(Xs), np.nan)

    def vag(x):
        return np.nan, np.zeros_like(x)

    with pytest.raises(NumericalError):
        optimize_objective(batch, vag, 2, rng, OptimiserConfig(n_samples=10))


def test_exploit_beats_sampled_mean(rng, small_model, cheap_opt):
    x = exploit(small_model, rng, cheap_opt)
    assert x.shape == (small_model.d,)
    assert np.all(x >= 0.0) and np.all(x <= 1.0)
    mu_star, _ = small_model.posterior(x)
    grid = rng.uniform(size=(cheap_opt.samples_for(small_model.d), small_model.d))
    mu, _ = small_model.posterior_batch(grid)
    # The refined point should not be worse than a typical sample.
    assert mu_star <= np.median(mu)


def test_ei_select_in_bounds(rng, small_model, cheap_opt):
    x = ei_select(small_model, float(np.min(small_model.y)), rng, cheap_opt)
    assert np.all(x >= 0.0) and np.all(x <= 1.0)
