"""Zero-mean Gaussian process surrogate with an isotropic Matern-5/2 kernel.

The model operates on unit-cube inputs and standardised outputs. Benchmarks
are noiseless, so the noise variance is a fixed jitter (escalated tenfold on
Cholesky failure) rather than a fitted parameter.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.optimize import minimize
from scipy.spatial.distance import cdist

from .exceptions import NumericalError, StateError

__all__ = [
    "GPHyperparams",
    "GPModel",
    "matern52",
    "log_marginal_likelihood",
    "fit_hyperparameters",
    "DEFAULT_JITTER",
    "LENGTHSCALE_BOUNDS",
    "SIGNAL_VARIANCE_BOUNDS",
]

SQRT5 = np.sqrt(5.0)
DEFAULT_JITTER = 1e-6
MAX_JITTER = 1e-2
LENGTHSCALE_BOUNDS = (1e-3, 10.0)
SIGNAL_VARIANCE_BOUNDS = (1e-3, 1e3)


@dataclass(frozen=True)
class GPHyperparams:
    """Isotropic Matern-5/2 hyperparameters in unit-cube/standardised units."""

    lengthscale: float
    signal_variance: float
    noise_variance: float = DEFAULT_JITTER

    def __post_init__(self):
        if self.lengthscale <= 0 or self.signal_variance <= 0:
            raise ValueError("lengthscale and signal variance must be positive")
        if self.noise_variance < 0:
            raise ValueError("noise variance must be non-negative")


def _matern52_of_r(r: np.ndarray, hp: GPHyperparams) -> np.ndarray:
    s = SQRT5 * r / hp.lengthscale
    return hp.signal_variance * (1.0 + s + s * s / 3.0) * np.exp(-s)


def matern52(x, x2, hp: GPHyperparams) -> float:
    """Matern-5/2 covariance between two points."""
    r = float(np.linalg.norm(np.asarray(x, float) - np.asarray(x2, float)))
    return float(_matern52_of_r(np.asarray(r), hp))


def kernel_cross(A: np.ndarray, B: np.ndarray, hp: GPHyperparams) -> np.ndarray:
    """Covariance matrix between the rows of A (n x d) and B (m x d)."""
    return _matern52_of_r(cdist(A, B), hp)


def kernel_vector_and_jacobian(
    x: np.ndarray, X: np.ndarray, hp: GPHyperparams
) -> tuple[np.ndarray, np.ndarray]:
    """k(x, X) together with its Jacobian wrt x, shape (t,) and (t, d).

    dk/dx = -(5 sf^2 r / (3 l^2)) (1 + sqrt5 r / l) exp(-sqrt5 r / l) * (x - xi)/r
    with the r -> 0 limit equal to zero.
    """
    x = np.asarray(x, float).ravel()
    diff = x[None, :] - X
    r = np.linalg.norm(diff, axis=1)
    s = SQRT5 * r / hp.lengthscale
    k = hp.signal_variance * (1.0 + s + s * s / 3.0) * np.exp(-s)
    coef = -(5.0 * hp.signal_variance / (3.0 * hp.lengthscale**2)) * (1.0 + s) * np.exp(-s)
    jac = coef[:, None] * diff
    return k, jac


class GPModel:
    """Fitted GP with a cached Cholesky factor of K + sigma_n^2 I."""

    def __init__(self, X: np.ndarray, y: np.ndarray, hp: GPHyperparams):
        X = np.asarray(X, float)
        y = np.asarray(y, float).ravel()
        if X.ndim != 2 or X.shape[0] != y.size or y.size < 1:
            raise StateError("model requires at least one observation")
        self.X = X
        self.y = y
        self.hp = hp
        K = kernel_cross(X, X, hp)
        self.chol, self.hp = _chol_with_escalation(K, hp)
        self.alpha = cho_solve((self.chol, True), y)

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def t(self) -> int:
        return self.X.shape[0]

    def posterior(self, x) -> tuple[float, float]:
        """Posterior mean and (clamped non-negative) variance at one point."""
        mu, var = self.posterior_batch(np.asarray(x, float).reshape(1, -1))
        return float(mu[0]), float(var[0])

    def posterior_batch(self, Xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised posterior mean/variance for rows of Xs (n x d)."""
        Xs = np.asarray(Xs, float).reshape(-1, self.d)
        Kxs = kernel_cross(self.X, Xs, self.hp)  # (t, n)
        mu = Kxs.T @ self.alpha
        V = solve_triangular(self.chol, Kxs, lower=True)
        var = self.hp.signal_variance - np.einsum("ij,ij->j", V, V)
        return mu, np.maximum(var, 0.0)

    def posterior_with_grad(self, x) -> tuple[float, float, np.ndarray, np.ndarray]:
        """(mu, var, dmu/dx, dvar/dx) at a single point."""
        k, jac = kernel_vector_and_jacobian(x, self.X, self.hp)
        mu = float(k @ self.alpha)
        w = cho_solve((self.chol, True), k)
        var = float(self.hp.signal_variance - k @ w)
        dmu = jac.T @ self.alpha
        dvar = -2.0 * (jac.T @ w)
        return mu, max(var, 0.0), dmu, dvar

    def solve_cov(self, b: np.ndarray) -> np.ndarray:
        """(K + sigma_n^2 I)^{-1} b via the cached Cholesky factor."""
        return cho_solve((self.chol, True), b)


def _chol_with_escalation(K: np.ndarray, hp: GPHyperparams):
    """Cholesky of K + sigma_n^2 I, escalating the jitter tenfold on failure."""
    jitter = max(hp.noise_variance, DEFAULT_JITTER)
    t = K.shape[0]
    while jitter <= MAX_JITTER:
        try:
            L = np.linalg.cholesky(K + jitter * np.eye(t))
            if jitter != hp.noise_variance:
                hp = GPHyperparams(hp.lengthscale, hp.signal_variance, jitter)
            return L, hp
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise NumericalError("Cholesky factorisation failed after jitter escalation")


def log_marginal_likelihood(X, y, hp: GPHyperparams) -> float:
    """-1/2 y^T K^{-1} y - 1/2 log|K| - t/2 log(2 pi) with K = K + sigma_n^2 I."""
    val, _ = lml_and_grad(X, y, hp)
    return val


def lml_and_grad(X, y, hp: GPHyperparams) -> tuple[float, np.ndarray]:
    """Log marginal likelihood with its gradient wrt (log l, log sf^2)."""
    X = np.asarray(X, float)
    y = np.asarray(y, float).ravel()
    t = y.size
    r = cdist(X, X)
    s = SQRT5 * r / hp.lengthscale
    E = np.exp(-s)
    K = hp.signal_variance * (1.0 + s + s * s / 3.0) * E
    L, hp_used = _chol_with_escalation(K, hp)
    alpha = cho_solve((L, True), y)
    lml = (
        -0.5 * float(y @ alpha)
        - float(np.sum(np.log(np.diag(L))))
        - 0.5 * t * np.log(2.0 * np.pi)
    )
    # dK/dlog(l) and dK/dlog(sf^2); the jitter term is hyperparameter-free.
    dK_dlogl = hp.signal_variance * (s * s * (1.0 + s) / 3.0) * E
    dK_dlogsf = K
    Kinv = cho_solve((L, True), np.eye(t))
    A = np.outer(alpha, alpha) - Kinv
    grad = 0.5 * np.array(
        [np.sum(A * dK_dlogl), np.sum(A * dK_dlogsf)]
    )
    return lml, grad


def fit_hyperparameters(
    X,
    y,
    rng: np.random.Generator,
    restarts: int = 10,
    warm_start: GPHyperparams | None = None,
) -> GPModel:
    """Multi-restart L-BFGS-B maximisation of the log marginal likelihood.

    Searches in (log lengthscale, log signal variance) from `restarts` start
    points; when a warm start is supplied it replaces one random start.
    """
    X = np.asarray(X, float)
    y = np.asarray(y, float).ravel()
    if y.size < 2:
        raise StateError("hyperparameter fitting requires at least two observations")

    log_bounds = [
        tuple(np.log(LENGTHSCALE_BOUNDS)),
        tuple(np.log(SIGNAL_VARIANCE_BOUNDS)),
    ]

    def neg_lml(theta):
        hp = GPHyperparams(float(np.exp(theta[0])), float(np.exp(theta[1])))
        val, grad = lml_and_grad(X, y, hp)
        return -val, -grad

    starts = []
    if warm_start is not None:
        starts.append(
            np.log([warm_start.lengthscale, warm_start.signal_variance])
        )
    while len(starts) < restarts:
        starts.append(
            np.array([rng.uniform(lo, hi) for lo, hi in log_bounds])
        )

    best_val, best_theta = -np.inf, None
    for theta0 in starts:
        theta0 = np.clip(theta0, [b[0] for b in log_bounds], [b[1] for b in log_bounds])
        try:
            res = minimize(
                neg_lml,
                theta0,
                jac=True,
                method="L-BFGS-B",
                bounds=log_bounds,
            )
        except NumericalError:
            continue
        if np.isfinite(res.fun) and -res.fun > best_val:
            best_val, best_theta = -res.fun, res.x

    if best_theta is None:
        raise NumericalError("every hyperparameter restart failed")

    hp = GPHyperparams(float(np.exp(best_theta[0])), float(np.exp(best_theta[1])))
    return GPModel(X, y, hp)
