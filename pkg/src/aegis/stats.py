"""Evaluation statistics: median/MAD summaries, one-sided paired Wilcoxon
signed-rank tests with Holm-Bonferroni correction, best-or-equivalent method
flags and the fractional-rank bootstrap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr
from scipy.stats import rankdata

from .exceptions import ConfigurationError, DomainError

__all__ = [
    "MethodOutcome",
    "ComparisonRow",
    "median_mad",
    "wilcoxon_one_sided",
    "holm_bonferroni",
    "best_or_equivalent",
    "fractional_rank_bootstrap",
    "EXACT_WILCOXON_MAX_N",
]

EXACT_WILCOXON_MAX_N = 25


@dataclass(frozen=True)
class MethodOutcome:
    """Final regrets of one method, paired by repeat index across methods."""

    method: str
    regrets: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "regrets", np.asarray(self.regrets, dtype=float).ravel()
        )


@dataclass
class ComparisonRow:
    method: str
    median: float
    mad: float
    flag: str  # best | equivalent | worse
    p_value: float | None = None


def median_mad(values) -> tuple[float, float]:
    """Median and median absolute deviation from the median."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise DomainError("median_mad of an empty vector")
    med = float(np.median(v))
    return med, float(np.median(np.abs(v - med)))


def _signed_rank_statistic(a, b) -> tuple[float, np.ndarray, int]:
    """W+ (sum of ranks of positive differences), the |d| ranks, and n."""
    d = np.asarray(a, float).ravel() - np.asarray(b, float).ravel()
    d = d[d != 0.0]  # zero differences dropped (standard treatment)
    n = d.size
    if n == 0:
        return 0.0, np.empty(0), 0
    ranks = rankdata(np.abs(d))  # tied magnitudes share average ranks
    w_pos = float(np.sum(ranks[d > 0.0]))
    return w_pos, ranks, n


def _exact_cdf_leq(w_obs: float, ranks: np.ndarray) -> float:
    """P(W+ <= w_obs) under the null by dynamic programming.

    Ranks are doubled so averaged (half-integer) tie ranks stay integral.
    """
    scaled = np.rint(2.0 * ranks).astype(int)
    total = int(scaled.sum())
    dist = np.zeros(total + 1)
    dist[0] = 1.0
    for r in scaled:
        shifted = np.zeros_like(dist)
        shifted[r:] = dist[: total + 1 - r]
        dist = dist + shifted
    dist /= dist.sum()
    cutoff = min(int(np.rint(2.0 * w_obs)), total)  # ranks are half-integral
    return float(dist[: cutoff + 1].sum())


def wilcoxon_one_sided(a, b) -> float:
    """One-sided paired Wilcoxon signed-rank p-value for H1: a < b.

    Zero differences are dropped; tied magnitudes receive average ranks.
    Exact null enumeration for up to 25 effective pairs, otherwise a normal
    approximation with tie and continuity corrections.
    """
    a = np.asarray(a, float).ravel()
    b = np.asarray(b, float).ravel()
    if a.size != b.size:
        raise DomainError("paired test requires equal lengths")
    w_pos, ranks, n = _signed_rank_statistic(a, b)
    if n == 0:
        return 1.0  # no evidence: all paired differences are zero
    if n <= EXACT_WILCOXON_MAX_N:
        return min(_exact_cdf_leq(w_pos, ranks), 1.0)
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, counts = np.unique(ranks, return_counts=True)
    var -= np.sum(counts**3 - counts) / 48.0
    if var <= 0:
        return 1.0
    z = (w_pos - mean + 0.5) / np.sqrt(var)
    return float(ndtr(z))


def holm_bonferroni(pvals, alpha: float = 0.05) -> np.ndarray:
    """Step-down Holm correction; returns per-hypothesis reject flags in the
    original order."""
    p = np.asarray(pvals, dtype=float).ravel()
    m = p.size
    if m == 0:
        raise ConfigurationError("holm_bonferroni needs at least one p-value")
    order = np.argsort(p, kind="stable")
    reject = np.zeros(m, dtype=bool)
    for i, idx in enumerate(order):
        if p[idx] <= alpha / (m - i):
            reject[idx] = True
        else:
            break
    return reject


def best_or_equivalent(
    outcomes: list[MethodOutcome], alpha: float = 0.05
) -> list[ComparisonRow]:
    """Flag the lowest-median method as best and every method the Wilcoxon/
    Holm procedure cannot distinguish from it as equivalent.

    Median ties are broken by lower MAD, then by method name.
    """
    if len(outcomes) < 2:
        raise ConfigurationError("need at least two methods to compare")
    n = outcomes[0].regrets.size
    if any(o.regrets.size != n for o in outcomes):
        raise DomainError("all methods must share the repeat count")

    stats = {o.method: median_mad(o.regrets) for o in outcomes}
    best = min(outcomes, key=lambda o: (*stats[o.method], o.method))

    others = [o for o in outcomes if o is not best]
    pvals = [wilcoxon_one_sided(best.regrets, o.regrets) for o in others]
    rejects = holm_bonferroni(pvals, alpha)

    rows = []
    for o in outcomes:
        med, mad = stats[o.method]
        if o is best:
            rows.append(ComparisonRow(o.method, med, mad, "best"))
        else:
            i = others.index(o)
            flag = "worse" if rejects[i] else "equivalent"
            rows.append(ComparisonRow(o.method, med, mad, flag, float(pvals[i])))
    return rows


def fractional_rank_bootstrap(
    traces: dict[str, np.ndarray],
    rng: np.random.Generator,
    n_boot: int = 1000,
) -> dict[str, np.ndarray]:
    """Mean fractional rank of each method at every iteration.

    `traces` maps method -> (repeats, iterations) regret array. Each
    bootstrap draw picks one repeat per method with replacement, ranks the
    methods per iteration (ties share the average rank) and the ranks are
    averaged over draws.
    """
    methods = sorted(traces)
    arrays = [np.atleast_2d(np.asarray(traces[m], float)) for m in methods]
    n_iter = arrays[0].shape[1]
    if any(a.shape[1] != n_iter for a in arrays):
        raise DomainError("all methods must share the iteration grid")

    totals = np.zeros((len(methods), n_iter))
    for _ in range(n_boot):
        sample = np.stack(
            [a[rng.integers(a.shape[0])] for a in arrays]
        )  # (methods, iterations)
        totals += rankdata(sample, axis=0)
    means = totals / n_boot
    return {m: means[i] for i, m in enumerate(methods)}
