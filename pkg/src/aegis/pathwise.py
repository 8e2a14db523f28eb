"""Decoupled pathwise samples from the GP posterior.

A draw g(x) = phi(x)^T w + k(x, X)^T v combines a random-Fourier-feature
approximation of the weight-space prior (w standard normal) with an exact
function-space correction v = (K + sigma_n^2 I)^{-1} (y - phi(X) w). The
draw is cheap to evaluate anywhere and differentiable in x.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .acquisition import OptimiserConfig, optimize_objective
from .gp import GPHyperparams, GPModel, kernel_cross, kernel_vector_and_jacobian

__all__ = [
    "FeatureMap",
    "FunctionDraw",
    "sample_feature_map",
    "draw_function",
    "minimise_draw",
    "DEFAULT_N_FEATURES",
]

DEFAULT_N_FEATURES = 2000


@dataclass(frozen=True)
class FeatureMap:
    """Random Fourier features phi(x) = scale * cos(Omega x + b)."""

    frequencies: np.ndarray  # (n_features, d)
    phases: np.ndarray  # (n_features,)
    scale: float

    @property
    def n_features(self) -> int:
        return self.phases.size

    def features(self, X: np.ndarray) -> np.ndarray:
        """Feature matrix for rows of X, shape (n, n_features)."""
        X = np.atleast_2d(np.asarray(X, float))
        return self.scale * np.cos(X @ self.frequencies.T + self.phases)

    def feature_jacobian(self, x: np.ndarray) -> np.ndarray:
        """d phi / d x at a single point, shape (n_features, d)."""
        x = np.asarray(x, float).ravel()
        arg = self.frequencies @ x + self.phases
        return (-self.scale * np.sin(arg))[:, None] * self.frequencies


def sample_feature_map(
    hp: GPHyperparams,
    d: int,
    rng: np.random.Generator,
    n_features: int = DEFAULT_N_FEATURES,
) -> FeatureMap:
    """Draw a feature map from the Matern-5/2 spectral density.

    Frequencies use the Gaussian/chi-squared scale mixture: omega =
    z * sqrt(5/u) / lengthscale with z ~ N(0, I_d) and u ~ chi2(5); phases
    are uniform on [0, 2 pi).
    """
    if n_features < 1:
        raise ValueError("n_features must be >= 1")
    z = rng.standard_normal((n_features, d))
    u = rng.chisquare(5, size=n_features)
    omega = z * np.sqrt(5.0 / u)[:, None] / hp.lengthscale
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n_features)
    scale = np.sqrt(2.0 * hp.signal_variance / n_features)
    return FeatureMap(omega, phases, scale)


class FunctionDraw:
    """One posterior sample g, callable and differentiable on the unit cube."""

    def __init__(self, model: GPModel, feature_map: FeatureMap, weights: np.ndarray):
        self.model = model
        self.feature_map = feature_map
        self.weights = np.asarray(weights, float)
        prior_at_X = self.feature_map.features(model.X) @ self.weights
        self.correction = model.solve_cov(model.y - prior_at_X)

    @property
    def d(self) -> int:
        return self.model.d

    def __call__(self, x) -> float:
        return float(self.batch(np.asarray(x, float).reshape(1, -1))[0])

    def batch(self, Xs: np.ndarray) -> np.ndarray:
        Xs = np.asarray(Xs, float).reshape(-1, self.d)
        prior = self.feature_map.features(Xs) @ self.weights
        update = kernel_cross(Xs, self.model.X, self.model.hp) @ self.correction
        return prior + update

    def value_and_grad(self, x) -> tuple[float, np.ndarray]:
        x = np.asarray(x, float).ravel()
        phi_jac = self.feature_map.feature_jacobian(x)
        k, k_jac = kernel_vector_and_jacobian(x, self.model.X, self.model.hp)
        phi = self.feature_map.features(x[None, :])[0]
        val = float(phi @ self.weights + k @ self.correction)
        grad = phi_jac.T @ self.weights + k_jac.T @ self.correction
        return val, grad


def draw_function(
    model: GPModel,
    feature_map: FeatureMap,
    rng: np.random.Generator,
) -> FunctionDraw:
    """Sample prior weights and assemble the pathwise posterior draw."""
    w = rng.standard_normal(feature_map.n_features)
    return FunctionDraw(model, feature_map, w)


def minimise_draw(
    g: FunctionDraw,
    rng: np.random.Generator,
    cfg: OptimiserConfig = OptimiserConfig(),
) -> np.ndarray:
    """Locate an in-bounds minimiser of the draw."""
    return optimize_objective(g.batch, g.value_and_grad, g.d, rng, cfg, minimise=True)
