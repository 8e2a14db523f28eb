"""Selection policies: the asynchronous epsilon-greedy algorithm, its ablation
variants, and the Thompson sampling / Kriging Believer / Random baselines.

Every policy sees only COMPLETED observations through the fitted model; the
pending list is used by Kriging Believer alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import acquisition
from .acquisition import OptimiserConfig
from .design import latin_hypercube
from .exceptions import ConfigurationError
from .gp import GPModel
from .pareto import Nsga2Config, nsga2, random_pareto_point
from .pathwise import DEFAULT_N_FEATURES, draw_function, minimise_draw, sample_feature_map

__all__ = [
    "EpsilonSchedule",
    "StrategyConfig",
    "SelectionRecord",
    "epsilon_for",
    "aegis_select",
    "initial_batch",
    "ts_select",
    "kb_select",
    "random_select",
    "LhsStream",
    "ablation_config",
    "make_strategy",
    "STRATEGY_KINDS",
]

STRATEGY_KINDS = (
    "AEGiS",
    "AEGiS-RS",
    "NoPF",
    "NoTS",
    "NoExploit",
    "TS",
    "KB",
    "Random",
)


@dataclass(frozen=True)
class EpsilonSchedule:
    """How the total exploration probability decays with dimensionality."""

    variant: str = "default"  # default | faster | slower | fixed
    value: float | None = None  # only for variant == "fixed"

    def __post_init__(self):
        if self.variant not in ("default", "faster", "slower", "fixed"):
            raise ConfigurationError(f"unknown epsilon schedule {self.variant!r}")
        if self.variant == "fixed" and not (
            self.value is not None and 0.0 <= self.value <= 1.0
        ):
            raise ConfigurationError("fixed schedule needs a value in [0, 1]")


def epsilon_for(d: int, schedule: EpsilonSchedule = EpsilonSchedule()) -> float:
    """Exploration probability for dimensionality d under the schedule.

    default: min(2/sqrt(d), 1); faster: min(2/(d-2), 1) with d <= 2 mapped
    to 1 (division guard); slower: min(2/ln(d+3), 1). "Faster" decays
    quicker with d and therefore exploits more.
    """
    if d < 1:
        raise ConfigurationError("d must be >= 1")
    if schedule.variant == "default":
        return min(2.0 / math.sqrt(d), 1.0)
    if schedule.variant == "faster":
        return 1.0 if d <= 2 else min(2.0 / (d - 2), 1.0)
    if schedule.variant == "slower":
        return min(2.0 / math.log(d + 3), 1.0)
    return float(schedule.value)


@dataclass(frozen=True)
class StrategyConfig:
    """A strategy kind plus the parameters of its exploration split."""

    kind: str = "AEGiS"
    epsilon_schedule: EpsilonSchedule = field(default_factory=EpsilonSchedule)
    gamma: float = 0.5  # share of exploration given to Thompson sampling

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ConfigurationError(f"unknown strategy kind {self.kind!r}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigurationError("gamma must lie in [0, 1]")

    def epsilon_split(self, d: int) -> tuple[float, float]:
        """(eps_T, eps_P): Thompson-sampling and Pareto-selection shares."""
        eps = epsilon_for(d, self.epsilon_schedule)
        if self.kind in ("AEGiS", "AEGiS-RS"):
            return self.gamma * eps, (1.0 - self.gamma) * eps
        if self.kind == "NoPF":
            return eps, 0.0
        if self.kind == "NoTS":
            return 0.0, eps
        if self.kind == "NoExploit":
            return 0.5, 0.5
        raise ConfigurationError(f"{self.kind} has no epsilon split")


def ablation_config(kind: str) -> StrategyConfig:
    """Ablation variants: NoPF (all-TS exploration), NoTS (all-Pareto
    exploration), NoExploit (eps_T = eps_P = 1/2, no greedy branch)."""
    if kind not in ("NoPF", "NoTS", "NoExploit"):
        raise ConfigurationError(f"not an ablation kind: {kind!r}")
    return StrategyConfig(kind=kind)


@dataclass
class SelectionRecord:
    """Audit record of one selection: location, branch taken and the draw
    that decided it."""

    x: np.ndarray
    branch: str  # exploit | thompson | pareto | random-space | baseline
    r_drawn: float
    iteration: int = -1


def _thompson_point(
    model: GPModel,
    rng: np.random.Generator,
    opt_cfg: OptimiserConfig,
    n_features: int,
) -> np.ndarray:
    fmap = sample_feature_map(model.hp, model.d, rng, n_features)
    g = draw_function(model, fmap, rng)
    return minimise_draw(g, rng, opt_cfg)


def _exploration_point(
    model: GPModel,
    config: StrategyConfig,
    rng: np.random.Generator,
    nsga_cfg: Nsga2Config,
) -> tuple[np.ndarray, str]:
    if config.kind == "AEGiS-RS":
        return rng.uniform(size=model.d), "random-space"
    archive = nsga2(model, rng, nsga_cfg)
    return random_pareto_point(archive, rng), "pareto"


def aegis_select(
    model: GPModel,
    config: StrategyConfig,
    rng: np.random.Generator,
    pending: list[np.ndarray] | None = None,
    opt_cfg: OptimiserConfig = OptimiserConfig(),
    nsga_cfg: Nsga2Config = Nsga2Config(),
    n_features: int = DEFAULT_N_FEATURES,
) -> SelectionRecord:
    """One epsilon-greedy selection.

    Draws r ~ U(0,1): exploit the posterior mean when
    r < 1 - (eps_T + eps_P), minimise a fresh posterior draw when
    r < 1 - eps_P, otherwise pick from the approximate Pareto set (or, for
    the RS variant, uniformly from the whole space). Pending evaluations
    are deliberately ignored; the policy conditions on completed data only.
    """
    del pending  # conditioning is on completed observations only
    eps_t, eps_p = config.epsilon_split(model.d)
    r = float(rng.uniform())
    if r < 1.0 - (eps_t + eps_p):
        return SelectionRecord(acquisition.exploit(model, rng, opt_cfg), "exploit", r)
    if r < 1.0 - eps_p:
        return SelectionRecord(
            _thompson_point(model, rng, opt_cfg, n_features), "thompson", r
        )
    x, branch = _exploration_point(model, config, rng, nsga_cfg)
    return SelectionRecord(x, branch, r)


def initial_batch(
    model: GPModel,
    config: StrategyConfig,
    q: int,
    rng: np.random.Generator,
    opt_cfg: OptimiserConfig = OptimiserConfig(),
    nsga_cfg: Nsga2Config = Nsga2Config(),
    n_features: int = DEFAULT_N_FEATURES,
) -> list[SelectionRecord]:
    """Fill q workers after the initial design: one greedy point, then
    Thompson/Pareto picks in proportion eps_T : eps_P.

    The greedy minimiser is deterministic given the model, so it is chosen
    exactly once here.
    """
    if q < 1:
        raise ConfigurationError("q must be >= 1")
    eps_t, eps_p = config.epsilon_split(model.d)
    if q > 1 and eps_t + eps_p == 0.0:
        raise ConfigurationError(
            "initial batch with q > 1 requires a non-zero exploration probability"
        )
    records = [
        SelectionRecord(acquisition.exploit(model, rng, opt_cfg), "exploit", -1.0)
    ]
    p_thompson = eps_t / (eps_t + eps_p) if q > 1 else 0.0
    for _ in range(q - 1):
        r = float(rng.uniform())
        if r < p_thompson:
            records.append(
                SelectionRecord(
                    _thompson_point(model, rng, opt_cfg, n_features), "thompson", r
                )
            )
        else:
            x, branch = _exploration_point(model, config, rng, nsga_cfg)
            records.append(SelectionRecord(x, branch, r))
    return records


def ts_select(
    model: GPModel,
    rng: np.random.Generator,
    opt_cfg: OptimiserConfig = OptimiserConfig(),
    n_features: int = DEFAULT_N_FEATURES,
) -> np.ndarray:
    """Pure Thompson sampling: minimise one fresh posterior draw."""
    return _thompson_point(model, rng, opt_cfg, n_features)


def kb_select(
    model: GPModel,
    pending: list[np.ndarray],
    rng: np.random.Generator,
    opt_cfg: OptimiserConfig = OptimiserConfig(),
) -> np.ndarray:
    """Kriging Believer: condition on pending points at their posterior-mean
    values (hyperparameters frozen, no refit), then maximise EI.

    The incumbent f* stays the best completed observation; hallucinated
    values never improve it.
    """
    f_best = float(np.min(model.y))
    if pending:
        P = np.atleast_2d(np.asarray(pending, float))
        mu_p, _ = model.posterior_batch(P)
        aug = GPModel(
            np.vstack([model.X, P]), np.append(model.y, mu_p), model.hp
        )
    else:
        aug = model
    return acquisition.ei_select(aug, f_best, rng, opt_cfg)


class LhsStream:
    """Space-filling random stream: Latin hypercube designs consumed point by
    point and refilled in blocks."""

    def __init__(self, d: int, rng: np.random.Generator, block: int = 200):
        self.d = d
        self.rng = rng
        self.block = block
        self._buffer: list[np.ndarray] = []

    def next(self) -> np.ndarray:
        if not self._buffer:
            X = latin_hypercube(self.block, self.d, self.rng, candidates=1)
            self._buffer = [row for row in X]
        return self._buffer.pop(0)


def random_select(stream: LhsStream) -> np.ndarray:
    """Next point of the per-run Latin hypercube stream."""
    return stream.next()


class _PolicyBase:
    needs_model = True

    def initial_batch(self, model, q, rng) -> list[SelectionRecord]:
        return [self.select(model, [], rng) for _ in range(q)]

    def select(self, model, pending, rng) -> SelectionRecord:  # pragma: no cover
        raise NotImplementedError


class AegisPolicy(_PolicyBase):
    """AEGiS, AEGiS-RS and the ablation variants."""

    def __init__(self, config, opt_cfg, nsga_cfg, n_features):
        self.config = config
        self.opt_cfg = opt_cfg
        self.nsga_cfg = nsga_cfg
        self.n_features = n_features

    def initial_batch(self, model, q, rng):
        return initial_batch(
            model, self.config, q, rng, self.opt_cfg, self.nsga_cfg, self.n_features
        )

    def select(self, model, pending, rng):
        return aegis_select(
            model,
            self.config,
            rng,
            pending,
            self.opt_cfg,
            self.nsga_cfg,
            self.n_features,
        )


class TsPolicy(_PolicyBase):
    def __init__(self, opt_cfg, n_features):
        self.opt_cfg = opt_cfg
        self.n_features = n_features

    def select(self, model, pending, rng):
        x = ts_select(model, rng, self.opt_cfg, self.n_features)
        return SelectionRecord(x, "baseline", -1.0)


class KbPolicy(_PolicyBase):
    def __init__(self, opt_cfg):
        self.opt_cfg = opt_cfg

    def initial_batch(self, model, q, rng):
        records, pending = [], []
        for _ in range(q):
            rec = self.select(model, pending, rng)
            pending.append(rec.x)
            records.append(rec)
        return records

    def select(self, model, pending, rng):
        x = kb_select(model, list(pending), rng, self.opt_cfg)
        return SelectionRecord(x, "baseline", -1.0)


class RandomPolicy(_PolicyBase):
    needs_model = False

    def __init__(self, d: int, lhs_rng: np.random.Generator):
        self.stream = LhsStream(d, lhs_rng)

    def select(self, model, pending, rng):
        return SelectionRecord(random_select(self.stream), "baseline", -1.0)


def make_strategy(
    config: StrategyConfig,
    d: int,
    lhs_rng: np.random.Generator | None = None,
    opt_cfg: OptimiserConfig = OptimiserConfig(),
    nsga_cfg: Nsga2Config = Nsga2Config(),
    n_features: int = DEFAULT_N_FEATURES,
):
    """Instantiate the selection policy for one optimisation run."""
    if config.kind in ("AEGiS", "AEGiS-RS", "NoPF", "NoTS", "NoExploit"):
        return AegisPolicy(config, opt_cfg, nsga_cfg, n_features)
    if config.kind == "TS":
        return TsPolicy(opt_cfg, n_features)
    if config.kind == "KB":
        return KbPolicy(opt_cfg)
    if config.kind == "Random":
        if lhs_rng is None:
            raise ConfigurationError("Random strategy needs a dedicated LHS stream rng")
        return RandomPolicy(d, lhs_rng)
    raise ConfigurationError(f"unknown strategy kind {config.kind!r}")
