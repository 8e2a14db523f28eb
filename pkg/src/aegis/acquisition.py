"""Expected Improvement, greedy mean exploitation and the shared inner optimiser.

The inner optimiser follows the sample-then-refine strategy: evaluate the
objective at 1000d uniform points, refine the best 10 with box-constrained
L-BFGS-B, and return the overall best location.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize
from scipy.special import ndtr

from .exceptions import NumericalError
from .gp import GPModel

__all__ = [
    "OptimiserConfig",
    "expected_improvement",
    "expected_improvement_grad",
    "optimize_objective",
    "exploit",
    "ei_select",
]


@dataclass(frozen=True)
class OptimiserConfig:
    """Budgets of the sample-then-refine inner optimiser."""

    n_samples: int | None = None  # None -> 1000 * d
    n_refine: int = 10
    max_refine_steps: int = 100
    tolerance: float = 1e-8

    def samples_for(self, d: int) -> int:
        return 1000 * d if self.n_samples is None else self.n_samples


def _norm_pdf(z):
    with np.errstate(over="ignore"):  # z^2 may overflow; exp(-inf) = 0 is right
        return np.exp(-0.5 * np.square(z)) / np.sqrt(2.0 * np.pi)


def expected_improvement(mu, sigma, f_best):
    """Closed-form EI for minimisation; the sigma=0 branch is the limit
    max(f_best - mu, 0)."""
    mu = np.asarray(mu, float)
    sigma = np.asarray(sigma, float)
    improve = f_best - mu
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        z = np.where(sigma > 0, improve / np.where(sigma > 0, sigma, 1.0), 0.0)
        ei = np.where(
            sigma > 0,
            improve * ndtr(z) + sigma * _norm_pdf(z),
            np.maximum(improve, 0.0),
        )
    out = np.maximum(ei, 0.0)
    return float(out) if out.ndim == 0 else out


def expected_improvement_grad(mu, sigma, f_best, dmu, dvar):
    """Gradient of EI wrt x given mean/variance gradients at one point."""
    if sigma <= 0:
        return np.zeros_like(dmu)
    z = (f_best - mu) / sigma
    dsigma = dvar / (2.0 * sigma)
    return -ndtr(z) * dmu + _norm_pdf(z) * dsigma


def optimize_objective(
    batch_fn: Callable[[np.ndarray], np.ndarray],
    value_and_grad: Callable[[np.ndarray], tuple[float, np.ndarray]],
    d: int,
    rng: np.random.Generator,
    cfg: OptimiserConfig = OptimiserConfig(),
    minimise: bool = True,
) -> np.ndarray:
    """Sample-then-refine optimisation of a scalar field on the unit cube.

    ``batch_fn`` evaluates the objective at an (n, d) array of points;
    ``value_and_grad`` returns (value, gradient) at a single point. Both are
    stated in the objective's natural orientation; set ``minimise=False`` to
    maximise. The returned point always lies in [0, 1]^d and is never worse
    than the best sampled point.
    """
    n_samples = cfg.samples_for(d)
    cand = rng.uniform(size=(n_samples, d))
    vals = np.asarray(batch_fn(cand), float).ravel()
    if not np.all(np.isfinite(vals)):
        bad = cand[~np.isfinite(vals)][0]
        raise NumericalError(f"non-finite objective value at {bad!r}")

    sign = 1.0 if minimise else -1.0
    order = np.argsort(sign * vals)
    n_refine = min(cfg.n_refine, n_samples)
    best_x = cand[order[0]].copy()
    best_val = sign * vals[order[0]]

    def signed(x):
        v, g = value_and_grad(x)
        if not np.isfinite(v):
            raise NumericalError(f"non-finite objective value at {x!r}")
        return sign * v, sign * np.asarray(g, float)

    bounds = [(0.0, 1.0)] * d
    for i in order[:n_refine]:
        res = minimize(
            signed,
            cand[i],
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": cfg.max_refine_steps, "ftol": cfg.tolerance},
        )
        if np.isfinite(res.fun) and res.fun < best_val:
            best_val = res.fun
            best_x = np.clip(res.x, 0.0, 1.0)
    return best_x


def exploit(
    model: GPModel,
    rng: np.random.Generator,
    cfg: OptimiserConfig = OptimiserConfig(),
) -> np.ndarray:
    """Minimise the posterior mean."""

    def batch(Xs):
        mu, _ = model.posterior_batch(Xs)
        return mu

    def value_and_grad(x):
        mu, _, dmu, _ = model.posterior_with_grad(x)
        return mu, dmu

    return optimize_objective(batch, value_and_grad, model.d, rng, cfg, minimise=True)


def ei_select(
    model: GPModel,
    f_best_std: float,
    rng: np.random.Generator,
    cfg: OptimiserConfig = OptimiserConfig(),
) -> np.ndarray:
    """Maximise Expected Improvement over the model's unit cube."""

    def batch(Xs):
        mu, var = model.posterior_batch(Xs)
        return expected_improvement(mu, np.sqrt(var), f_best_std)

    def value_and_grad(x):
        mu, var, dmu, dvar = model.posterior_with_grad(x)
        sigma = np.sqrt(var)
        val = expected_improvement(mu, sigma, f_best_std)
        grad = expected_improvement_grad(mu, sigma, f_best_std, dmu, dvar)
        return val, grad

    return optimize_objective(batch, value_and_grad, model.d, rng, cfg, minimise=False)
