"""Input rescaling, output standardisation and Latin hypercube initial designs.

All optimisation-internal coordinates live in the unit cube; raw problem
coordinates appear only at the benchmark boundary.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist

from .exceptions import DomainError

__all__ = [
    "Bounds",
    "Dataset",
    "to_unit_cube",
    "from_unit_cube",
    "latin_hypercube",
    "save_design",
    "load_design",
]


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned box in raw problem units."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.shape != upper.shape or lower.ndim != 1 or lower.size < 1:
            raise DomainError("bounds must be 1-d arrays of equal length >= 1")
        if not np.all(lower < upper):
            raise DomainError("each lower bound must be strictly below its upper bound")

    @property
    def dim(self) -> int:
        return self.lower.size

    def contains(self, x_raw, atol: float = 0.0) -> bool:
        x = np.asarray(x_raw, dtype=float)
        return bool(
            np.all(x >= self.lower - atol) and np.all(x <= self.upper + atol)
        )


def to_unit_cube(x_raw, bounds: Bounds) -> np.ndarray:
    """Affinely map a raw point (or array of points) into [0, 1]^d."""
    x = np.asarray(x_raw, dtype=float)
    if not np.all(x >= bounds.lower) or not np.all(x <= bounds.upper):
        raise DomainError(f"point {x!r} outside bounds")
    return (x - bounds.lower) / (bounds.upper - bounds.lower)


def from_unit_cube(u, bounds: Bounds) -> np.ndarray:
    """Inverse of :func:`to_unit_cube`."""
    u = np.asarray(u, dtype=float)
    if np.any(u < -1e-12) or np.any(u > 1 + 1e-12):
        raise DomainError(f"point {u!r} outside the unit cube")
    return bounds.lower + u * (bounds.upper - bounds.lower)


def _check_unit(x: np.ndarray):
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("input must lie in the unit cube")


@dataclass
class Dataset:
    """Growing set of unit-cube inputs with standardised observations.

    ``f_std = (f_raw - out_mean) / out_std`` is kept consistent by
    re-standardising after every append. The standard deviation uses the
    unbiased (n-1) estimator, guarded to 1 for singleton or constant data.
    """

    d: int
    X: np.ndarray = field(default=None)
    f_raw: np.ndarray = field(default=None)
    out_mean: float = 0.0
    out_std: float = 1.0
    n_initial: int = 0

    def __post_init__(self):
        if self.X is None:
            self.X = np.empty((0, self.d))
        if self.f_raw is None:
            self.f_raw = np.empty(0)
        self.X = np.asarray(self.X, dtype=float).reshape(-1, self.d)
        self.f_raw = np.asarray(self.f_raw, dtype=float).ravel()
        _check_unit(self.X)
        if len(self.f_raw):
            self.restandardise()

    def __len__(self) -> int:
        return self.f_raw.size

    @property
    def f_std(self) -> np.ndarray:
        return (self.f_raw - self.out_mean) / self.out_std

    def restandardise(self):
        """Recompute ``out_mean``/``out_std`` from the raw observations."""
        if len(self) == 0:
            self.out_mean, self.out_std = 0.0, 1.0
            return self
        self.out_mean = float(np.mean(self.f_raw))
        if len(self) == 1:
            self.out_std = 1.0
        else:
            std = float(np.std(self.f_raw, ddof=1))
            self.out_std = std if std > 0.0 else 1.0
        return self

    def append(self, x, f: float) -> "Dataset":
        """Return a new dataset extended with one (unit-cube x, raw f) pair."""
        x = np.asarray(x, dtype=float).reshape(1, self.d)
        _check_unit(x)
        return Dataset(
            d=self.d,
            X=np.vstack([self.X, x]),
            f_raw=np.append(self.f_raw, float(f)),
            n_initial=self.n_initial,
        )

    def copy(self) -> "Dataset":
        return Dataset(
            d=self.d,
            X=self.X.copy(),
            f_raw=self.f_raw.copy(),
            n_initial=self.n_initial,
        )


def latin_hypercube(
    n: int, d: int, rng: np.random.Generator, candidates: int = 100
) -> np.ndarray:
    """Maximin Latin hypercube design in the unit cube.

    Draws ``candidates`` independent LHS designs and keeps the one with the
    largest minimum pairwise distance. Every column has exactly one sample
    per stratum [k/n, (k+1)/n).
    """
    if n < 1 or candidates < 1:
        raise DomainError("n and candidates must be >= 1")

    def one_design() -> np.ndarray:
        perms = np.stack([rng.permutation(n) for _ in range(d)], axis=1)
        return (perms + rng.uniform(size=(n, d))) / n

    if n == 1:
        return one_design()

    best, best_dist = None, -np.inf
    for _ in range(candidates):
        X = one_design()
        dist = pdist(X).min()
        if dist > best_dist:
            best, best_dist = X, dist
    return best


def save_design(path, X_raw: np.ndarray, f_raw: np.ndarray):
    """Write an initial design as CSV: raw coordinates then the observation."""
    X_raw = np.atleast_2d(np.asarray(X_raw, dtype=float))
    f_raw = np.asarray(f_raw, dtype=float).ravel()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row, f in zip(X_raw, f_raw):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(f))])


def load_design(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a design written by :func:`save_design`."""
    rows = []
    with open(path, newline="") as fh:
        for record in csv.reader(fh):
            if record:
                rows.append([float(v) for v in record])
    arr = np.asarray(rows, dtype=float)
    return arr[:, :-1], arr[:, -1]
