"""Bi-objective NSGA-II over (minimise posterior mean, maximise posterior
variance), producing the approximate exploration-exploitation Pareto set.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, StateError
from .gp import GPModel

__all__ = [
    "Individual",
    "ParetoArchive",
    "Nsga2Config",
    "dominates",
    "non_dominated_sort",
    "crowding_distance",
    "vary",
    "nsga2",
    "random_pareto_point",
]


@dataclass
class Individual:
    """A candidate point with its posterior objectives and NSGA-II bookkeeping."""

    x: np.ndarray
    mu: float
    sigma2: float
    rank: int | None = None
    crowding: float | None = None


@dataclass
class ParetoArchive:
    """Mutually non-dominating (x, mu, sigma2) trade-off points."""

    members: list[Individual] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)

    def points(self) -> np.ndarray:
        return np.array([m.x for m in self.members])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            d = self.members[0].x.size if self.members else 0
            writer.writerow([f"x{i}" for i in range(d)] + ["mu", "sigma2"])
            for m in self.members:
                writer.writerow(list(m.x) + [m.mu, m.sigma2])


@dataclass(frozen=True)
class Nsga2Config:
    pop_size: int | None = None  # None -> 100 * d, rounded up to even
    generations: int = 100
    crossover_prob: float = 0.8
    mutation_prob: float | None = None  # None -> 1 / d
    eta_c: float = 20.0
    eta_m: float = 20.0

    def pop_for(self, d: int) -> int:
        n = 100 * d if self.pop_size is None else self.pop_size
        return n + (n % 2)

    def mutation_for(self, d: int) -> float:
        return 1.0 / d if self.mutation_prob is None else self.mutation_prob


def dominates(a: Individual, b: Individual) -> bool:
    """True iff a is no worse in both objectives and strictly better in one."""
    return (
        a.mu <= b.mu
        and a.sigma2 >= b.sigma2
        and (a.mu < b.mu or a.sigma2 > b.sigma2)
    )


def _objectives(pop: list[Individual]) -> np.ndarray:
    # Both columns as minimisation objectives: (mu, -sigma2).
    return np.array([[ind.mu, -ind.sigma2] for ind in pop])


def _sort_fronts(F: np.ndarray) -> list[np.ndarray]:
    """Index lists of the non-dominated fronts of objective rows F (min-min).

    Two objectives admit an O(n log n) sweep: process points in (f1, f2)
    lexicographic order and place each on the earliest front whose current
    best second objective does not dominate it. Ties (including duplicated
    points, which never dominate each other) are handled by also tracking
    the f1 of the point attaining each front's minimal f2.
    """
    if F.shape[1] == 2:
        return _sort_fronts_2d(F)
    return _sort_fronts_general(F)


def _sort_fronts_2d(F: np.ndarray) -> list[np.ndarray]:
    order = np.lexsort((F[:, 1], F[:, 0]))
    f1s = F[order, 0].tolist()
    f2s = F[order, 1].tolist()
    # Per existing front: minimal f2 so far and the f1 of the (earliest)
    # point attaining it. A front "blocks" a candidate iff that point
    # dominates the candidate; blocking is monotone over fronts, so the
    # candidate's front is found by binary search.
    min_f2: list[float] = []
    f1_at_min: list[float] = []
    assignment = []
    n_fronts = 0
    for f1, f2 in zip(f1s, f2s):
        lo, hi = 0, n_fronts
        while lo < hi:
            mid = (lo + hi) // 2
            m = min_f2[mid]
            if m < f2 or (m == f2 and f1_at_min[mid] < f1):
                lo = mid + 1
            else:
                hi = mid
        if lo == n_fronts:
            min_f2.append(f2)
            f1_at_min.append(f1)
            n_fronts += 1
        elif f2 < min_f2[lo]:
            min_f2[lo] = f2
            f1_at_min[lo] = f1
        assignment.append(lo)
    ranks = np.empty(F.shape[0], dtype=int)
    ranks[order] = assignment
    return [np.flatnonzero(ranks == k) for k in range(n_fronts)]


def _sort_fronts_general(F: np.ndarray) -> list[np.ndarray]:
    n = F.shape[0]
    le = (F[:, None, :] <= F[None, :, :]).all(axis=2)
    lt = (F[:, None, :] < F[None, :, :]).any(axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0)
    fronts = []
    remaining = np.ones(n, dtype=bool)
    while remaining.any():
        members = np.flatnonzero(remaining & (counts == 0))
        if members.size == 0:  # defensive; cannot happen for a strict order
            members = np.flatnonzero(remaining)
        fronts.append(members)
        remaining[members] = False
        counts = counts - dom[members].sum(axis=0)
    return fronts


def non_dominated_sort(pop: list[Individual]) -> list[list[Individual]]:
    """Partition the population into fronts; front 0 is dominated by none."""
    if not pop:
        raise StateError("population must be non-empty")
    fronts_idx = _sort_fronts(_objectives(pop))
    fronts = []
    for k, idx in enumerate(fronts_idx):
        for i in idx:
            pop[i].rank = k
        fronts.append([pop[i] for i in idx])
    return fronts


def _crowding_from_objectives(F: np.ndarray) -> np.ndarray:
    n = F.shape[0]
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for j in range(F.shape[1]):
        order = np.argsort(F[:, j], kind="stable")
        vals = F[order, j]
        rng = vals[-1] - vals[0]
        dist[order[0]] = dist[order[-1]] = np.inf
        if rng > 0:
            dist[order[1:-1]] += (vals[2:] - vals[:-2]) / rng
    return dist


def crowding_distance(front: list[Individual]) -> np.ndarray:
    """Per-objective normalised neighbour gaps; boundary members get +inf."""
    if not front:
        raise StateError("front must be non-empty")
    dist = _crowding_from_objectives(_objectives(front))
    for ind, c in zip(front, dist):
        ind.crowding = float(c)
    return dist


def _sbx_pairs(
    A: np.ndarray,
    B: np.ndarray,
    eta_c: float,
    crossover_prob: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover on paired parent rows, clipped to [0, 1]."""
    n, d = A.shape
    u = rng.uniform(size=(n, d))
    beta = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta_c + 1.0)),
        (0.5 / (1.0 - u)) ** (1.0 / (eta_c + 1.0)),
    )
    do_pair = rng.uniform(size=n) < crossover_prob
    beta = np.where(do_pair[:, None], beta, 1.0)
    C1 = 0.5 * ((1.0 + beta) * A + (1.0 - beta) * B)
    C2 = 0.5 * ((1.0 - beta) * A + (1.0 + beta) * B)
    return np.clip(C1, 0.0, 1.0), np.clip(C2, 0.0, 1.0)


def _polynomial_mutation(
    X: np.ndarray,
    eta_m: float,
    mutation_prob: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Polynomial mutation on [0, 1]-bounded rows."""
    u = rng.uniform(size=X.shape)
    apply = rng.uniform(size=X.shape) < mutation_prob
    exp = 1.0 / (eta_m + 1.0)
    lo_pow = (1.0 - X) ** (eta_m + 1.0)
    hi_pow = X ** (eta_m + 1.0)
    delta = np.where(
        u < 0.5,
        (2.0 * u + (1.0 - 2.0 * u) * hi_pow) ** exp - 1.0,
        1.0 - (2.0 * (1.0 - u) + (2.0 * u - 1.0) * lo_pow) ** exp,
    )
    # delta is stated for bounds [0, 1]: delta1 = x - lo = x, delta2 = hi - x.
    out = np.where(apply, X + delta, X)
    return np.clip(out, 0.0, 1.0)


def vary(
    parents: tuple[np.ndarray, np.ndarray],
    cfg: Nsga2Config,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """SBX crossover then polynomial mutation on one parent pair."""
    a = np.asarray(parents[0], float)[None, :]
    b = np.asarray(parents[1], float)[None, :]
    d = a.shape[1]
    c1, c2 = _sbx_pairs(a, b, cfg.eta_c, cfg.crossover_prob, rng)
    children = np.vstack([c1, c2])
    children = _polynomial_mutation(children, cfg.eta_m, cfg.mutation_for(d), rng)
    return children[0], children[1]


def _tournament(
    ranks: np.ndarray, crowd: np.ndarray, n_picks: int, rng: np.random.Generator
) -> np.ndarray:
    """Binary tournament on (rank asc, crowding desc)."""
    n = ranks.size
    i = rng.integers(n, size=n_picks)
    j = rng.integers(n, size=n_picks)
    i_wins = (ranks[i] < ranks[j]) | ((ranks[i] == ranks[j]) & (crowd[i] > crowd[j]))
    return np.where(i_wins, i, j)


def _rank_and_crowd(F: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    fronts = _sort_fronts(F)
    ranks = np.empty(F.shape[0], dtype=int)
    crowd = np.empty(F.shape[0])
    for k, idx in enumerate(fronts):
        ranks[idx] = k
        crowd[idx] = _crowding_from_objectives(F[idx])
    return ranks, crowd, fronts


def nsga2(
    model: GPModel,
    rng: np.random.Generator,
    cfg: Nsga2Config = Nsga2Config(),
) -> ParetoArchive:
    """Generational NSGA-II; returns front 0 of the final population."""
    d = model.d
    pop_size = cfg.pop_for(d)
    mut_prob = cfg.mutation_for(d)

    X = rng.uniform(size=(pop_size, d))
    mu, s2 = model.posterior_batch(X)
    F = np.column_stack([mu, -s2])

    for _ in range(cfg.generations):
        ranks, crowd, _ = _rank_and_crowd(F)
        parents = _tournament(ranks, crowd, pop_size, rng)
        A, B = X[parents[0::2]], X[parents[1::2]]
        C1, C2 = _sbx_pairs(A, B, cfg.eta_c, cfg.crossover_prob, rng)
        children = np.empty_like(X)
        children[0::2], children[1::2] = C1, C2
        children = _polynomial_mutation(children, cfg.eta_m, mut_prob, rng)

        mu_c, s2_c = model.posterior_batch(children)
        X_all = np.vstack([X, children])
        F_all = np.vstack([F, np.column_stack([mu_c, -s2_c])])

        _, _, fronts = _rank_and_crowd(F_all)
        keep = []
        for idx in fronts:
            if len(keep) + idx.size <= pop_size:
                keep.extend(idx.tolist())
            else:
                dist = _crowding_from_objectives(F_all[idx])
                order = np.argsort(-dist, kind="stable")
                keep.extend(idx[order[: pop_size - len(keep)]].tolist())
                break
        keep = np.asarray(keep)
        X, F = X_all[keep], F_all[keep]

    _, _, fronts = _rank_and_crowd(F)
    members = [
        Individual(x=X[i].copy(), mu=float(F[i, 0]), sigma2=float(-F[i, 1]), rank=0)
        for i in fronts[0]
    ]
    return ParetoArchive(members)


def random_pareto_point(archive: ParetoArchive, rng: np.random.Generator) -> np.ndarray:
    """Uniform choice over the archive members."""
    if len(archive) == 0:
        raise StateError("archive is empty")
    idx = int(rng.integers(len(archive)))
    return archive.members[idx].x.copy()
