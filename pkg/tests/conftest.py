import numpy as np
import pytest

from aegis.acquisition import OptimiserConfig
from aegis.gp import GPHyperparams, GPModel
from aegis.pareto import Nsga2Config


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cheap_opt():
    return OptimiserConfig(n_samples=80, n_refine=3, max_refine_steps=25)


@pytest.fixture
def cheap_nsga():
    return Nsga2Config(pop_size=24, generations=8)


def make_model(rng, d=2, n=12, lengthscale=0.35, signal_variance=1.2,
               noise_variance=1e-6):
    """Small GP on smooth synthetic data in the unit cube."""
    X = rng.uniform(size=(n, d))
    y = np.sin(3.0 * X[:, 0]) + np.cos(2.0 * X[:, -1]) + 0.1 * rng.standard_normal(n)
    hp = GPHyperparams(lengthscale, signal_variance, noise_variance)
    return GPModel(X, y, hp)


@pytest.fixture
def small_model(rng):
    return make_model(rng)
