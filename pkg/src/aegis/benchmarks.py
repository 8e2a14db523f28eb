"""The 15 synthetic test problems with their domains and analytic minima.

Each problem is a deterministic, noiseless objective over a raw-coordinate
box. Minima in ``_minima.py`` were frozen from a numerical verification pass
(tools/verify_minima.py): evaluation at published minimisers plus multistart
local refinement and, for separable functions, per-coordinate search.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._minima import FROZEN_MINIMA
from .design import Bounds, from_unit_cube
from .exceptions import ConfigurationError, DomainError

__all__ = ["Problem", "make_problem", "get_problem", "PROBLEM_TABLE", "problem_keys"]


@dataclass(frozen=True)
class Problem:
    name: str
    d: int
    bounds: Bounds
    objective: Callable[[np.ndarray], float]
    f_min: float
    x_min: tuple

    @property
    def key(self) -> str:
        return self.name

    def evaluate(self, x_raw) -> float:
        x = np.asarray(x_raw, dtype=float).ravel()
        if x.size != self.d:
            raise DomainError(f"{self.name} expects {self.d} coordinates")
        if not self.bounds.contains(x):
            raise DomainError(f"point {x!r} outside the domain of {self.name}")
        return float(self.objective(x))

    def evaluate_unit(self, u) -> float:
        """Evaluate at a unit-cube point via the affine domain map."""
        return self.evaluate(from_unit_cube(u, self.bounds))


def _branin(x):
    a, b, c = 1.0, 5.1 / (4.0 * np.pi**2), 5.0 / np.pi
    r, s, t = 6.0, 10.0, 1.0 / (8.0 * np.pi)
    return a * (x[1] - b * x[0] ** 2 + c * x[0] - r) ** 2 + s * (1 - t) * np.cos(x[0]) + s


def _eggholder(x):
    x1, x2 = x
    return -(x2 + 47.0) * np.sin(np.sqrt(abs(x2 + 0.5 * x1 + 47.0))) - x1 * np.sin(
        np.sqrt(abs(x1 - (x2 + 47.0)))
    )


def _goldstein_price(x):
    x1, x2 = x
    t1 = 1 + (x1 + x2 + 1) ** 2 * (
        19 - 14 * x1 + 3 * x1**2 - 14 * x2 + 6 * x1 * x2 + 3 * x2**2
    )
    t2 = 30 + (2 * x1 - 3 * x2) ** 2 * (
        18 - 32 * x1 + 12 * x1**2 + 48 * x2 - 36 * x1 * x2 + 27 * x2**2
    )
    return t1 * t2


def _six_hump_camel(x):
    x1, x2 = x
    return (
        (4.0 - 2.1 * x1**2 + x1**4 / 3.0) * x1**2
        + x1 * x2
        + (-4.0 + 4.0 * x2**2) * x2**2
    )


_HART3_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HART3_A = np.array(
    [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]]
)
_HART3_P = 1e-4 * np.array(
    [
        [3689.0, 1170.0, 2673.0],
        [4699.0, 4387.0, 7470.0],
        [1091.0, 8732.0, 5547.0],
        [381.0, 5743.0, 8828.0],
    ]
)


def _hartmann3(x):
    inner = np.sum(_HART3_A * (x[None, :] - _HART3_P) ** 2, axis=1)
    return -float(np.sum(_HART3_ALPHA * np.exp(-inner)))


_HART6_ALPHA = _HART3_ALPHA
_HART6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_HART6_P = 1e-4 * np.array(
    [
        [1312.0, 1696.0, 5569.0, 124.0, 8283.0, 5886.0],
        [2329.0, 4135.0, 8307.0, 3736.0, 1004.0, 9991.0],
        [2348.0, 1451.0, 3522.0, 2883.0, 3047.0, 6650.0],
        [4047.0, 8828.0, 8732.0, 5743.0, 1091.0, 381.0],
    ]
)


def _hartmann6(x):
    inner = np.sum(_HART6_A * (x[None, :] - _HART6_P) ** 2, axis=1)
    return -float(np.sum(_HART6_ALPHA * np.exp(-inner)))


def _ackley(x):
    d = x.size
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(np.mean(x**2)))
        - np.exp(np.mean(np.cos(2.0 * np.pi * x)))
        + 20.0
        + np.e
    )


MICHALEWICZ_STEEPNESS = 10


def _michalewicz(x):
    i = np.arange(1, x.size + 1)
    return -float(
        np.sum(np.sin(x) * np.sin(i * x**2 / np.pi) ** (2 * MICHALEWICZ_STEEPNESS))
    )


def _styblinski_tang(x):
    return 0.5 * float(np.sum(x**4 - 16.0 * x**2 + 5.0 * x))


def _rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


# (base name, dimensionality) -> (objective, lower, upper)
_SPECS = {
    ("Branin", 2): (_branin, [-5.0, 0.0], [10.0, 15.0]),
    ("Eggholder", 2): (_eggholder, [-512.0] * 2, [512.0] * 2),
    ("GoldsteinPrice", 2): (_goldstein_price, [-2.0] * 2, [2.0] * 2),
    ("SixHumpCamel", 2): (_six_hump_camel, [-3.0, -2.0], [3.0, 2.0]),
    ("Hartmann3", 3): (_hartmann3, [0.0] * 3, [1.0] * 3),
    ("Ackley", 5): (_ackley, [-32.768] * 5, [32.768] * 5),
    ("Ackley", 10): (_ackley, [-32.768] * 10, [32.768] * 10),
    ("Michalewicz", 5): (_michalewicz, [0.0] * 5, [np.pi] * 5),
    ("Michalewicz", 10): (_michalewicz, [0.0] * 10, [np.pi] * 10),
    ("StyblinskiTang", 5): (_styblinski_tang, [-5.0] * 5, [5.0] * 5),
    ("StyblinskiTang", 7): (_styblinski_tang, [-5.0] * 7, [5.0] * 7),
    ("StyblinskiTang", 10): (_styblinski_tang, [-5.0] * 10, [5.0] * 10),
    ("Hartmann6", 6): (_hartmann6, [0.0] * 6, [1.0] * 6),
    ("Rosenbrock", 7): (_rosenbrock, [-5.0] * 7, [10.0] * 7),
    ("Rosenbrock", 10): (_rosenbrock, [-5.0] * 10, [10.0] * 10),
}

# Names that appear at several dimensionalities get the dimension suffixed
# into their registry key (Ackley5, StyblinskiTang7, ...).
_MULTI_DIM = {name for name, _ in _SPECS if sum(n == name for n, _ in _SPECS) > 1}

PROBLEM_TABLE: list[tuple[str, int]] = sorted(_SPECS)


def _key_for(name: str, d: int) -> str:
    return f"{name}{d}" if name in _MULTI_DIM else name


def problem_keys() -> list[str]:
    return [_key_for(name, d) for name, d in PROBLEM_TABLE]


def make_problem(name: str, d: int) -> Problem:
    """Build one of the 15 registered (name, dimensionality) problems."""
    if (name, d) not in _SPECS:
        raise ConfigurationError(f"unknown benchmark: {name!r} with d={d}")
    objective, lower, upper = _SPECS[(name, d)]
    key = _key_for(name, d)
    f_min, x_min = FROZEN_MINIMA[key]
    return Problem(
        name=key,
        d=d,
        bounds=Bounds(np.array(lower), np.array(upper)),
        objective=objective,
        f_min=f_min,
        x_min=tuple(tuple(p) for p in x_min),
    )


def get_problem(key: str) -> Problem:
    """Look a problem up by its registry key (e.g. 'Branin', 'Ackley10')."""
    for name, d in PROBLEM_TABLE:
        if _key_for(name, d) == key:
            return make_problem(name, d)
    raise ConfigurationError(f"unknown benchmark key: {key!r}")
