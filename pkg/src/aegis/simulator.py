"""Deterministic discrete-event simulation of q asynchronous workers.

Evaluation cost is simulated time drawn from a half-normal runtime model;
there is no wall-clock dependence. RNG streams are split per purpose
(runtimes, hyperparameter fitting, strategy, LHS) so that adding or removing
strategy branches never perturbs the runtime draws. Completion ties are
broken by worker id.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .acquisition import OptimiserConfig
from .benchmarks import Problem
from .design import Dataset, from_unit_cube, latin_hypercube
from .exceptions import ConfigurationError, DomainError
from .gp import fit_hyperparameters
from .pareto import Nsga2Config
from .pathwise import DEFAULT_N_FEATURES
from .strategies import EpsilonSchedule, StrategyConfig, make_strategy

__all__ = [
    "RuntimeModel",
    "PendingJob",
    "EvalRecord",
    "RunResult",
    "sample_runtime",
    "run_optimisation",
    "regret_trace",
    "LOG_REGRET_FLOOR",
]

LOG_REGRET_FLOOR = 1e-12


@dataclass(frozen=True)
class RuntimeModel:
    """Half-normal evaluation times; the default scale gives mean runtime 1."""

    scale: float = float(np.sqrt(np.pi / 2.0))


def sample_runtime(model: RuntimeModel, rng: np.random.Generator) -> float:
    """|z| * scale with z standard normal, resampled on an exact zero."""
    while True:
        t = abs(rng.standard_normal()) * model.scale
        if t > 0.0:
            return float(t)


@dataclass(frozen=True)
class PendingJob:
    x: np.ndarray  # unit-cube location
    submit_time: float
    finish_time: float
    worker_id: int
    branch: str
    submit_index: int


@dataclass
class EvalRecord:
    """One completed evaluation; the trace stores these in completion order."""

    x_raw: list
    f_raw: float
    submit_time: float
    finish_time: float
    branch: str
    submit_index: int
    worker_id: int


@dataclass
class RunResult:
    problem: str
    method: str
    q: int
    budget: int
    seed: int
    design_seed: int
    config: dict
    evaluations: list[EvalRecord] = field(default_factory=list)

    def best_seen(self) -> float:
        return min(e.f_raw for e in self.evaluations)

    def to_jsonl(self, path):
        header = {
            "problem": self.problem,
            "method": self.method,
            "q": self.q,
            "budget": self.budget,
            "seed": self.seed,
            "design_seed": self.design_seed,
            "config": self.config,
        }
        with open(path, "w") as fh:
            fh.write(json.dumps(header) + "\n")
            for i, e in enumerate(self.evaluations):
                row = {"iteration": i, **asdict(e)}
                fh.write(json.dumps(row) + "\n")

    @classmethod
    def from_jsonl(cls, path) -> "RunResult":
        with open(path) as fh:
            lines = [json.loads(line) for line in fh if line.strip()]
        header, rows = lines[0], lines[1:]
        evals = [
            EvalRecord(
                x_raw=r["x_raw"],
                f_raw=r["f_raw"],
                submit_time=r["submit_time"],
                finish_time=r["finish_time"],
                branch=r["branch"],
                submit_index=r["submit_index"],
                worker_id=r["worker_id"],
            )
            for r in rows
        ]
        return cls(
            problem=header["problem"],
            method=header["method"],
            q=header["q"],
            budget=header["budget"],
            seed=header["seed"],
            design_seed=header["design_seed"],
            config=header["config"],
            evaluations=evals,
        )


def _config_snapshot(config: StrategyConfig, n_features: int, gp_restarts: int) -> dict:
    return {
        "kind": config.kind,
        "epsilon_schedule": config.epsilon_schedule.variant,
        "epsilon_value": config.epsilon_schedule.value,
        "gamma": config.gamma,
        "n_features": n_features,
        "gp_restarts": gp_restarts,
    }


def run_optimisation(
    problem: Problem,
    config: StrategyConfig,
    q: int,
    budget: int = 200,
    seed: int = 0,
    design_seed: int | None = None,
    opt_cfg: OptimiserConfig = OptimiserConfig(),
    nsga_cfg: Nsga2Config = Nsga2Config(),
    n_features: int = DEFAULT_N_FEATURES,
    gp_restarts: int = 10,
    runtime_model: RuntimeModel = RuntimeModel(),
) -> RunResult:
    """Run one strategy on one problem to a fixed evaluation budget.

    The 2d-point initial design runs first (as the earliest jobs); the
    initial-batch rule then fills the workers; thereafter a new location is
    selected the moment any worker frees, refitting the surrogate on all
    completed observations. Exactly `budget` evaluations are recorded.
    Fully deterministic given (problem, config, q, budget, seeds).
    """
    d = problem.d
    n_init = 2 * d
    if q < 1:
        raise ConfigurationError("q must be >= 1")
    if budget <= n_init:
        raise ConfigurationError(f"budget must exceed the initial design size {n_init}")

    if design_seed is None:
        design_seed = seed
    runtime_rng, fit_rng, strategy_rng, lhs_rng = (
        np.random.default_rng(s)
        for s in np.random.SeedSequence(seed).spawn(4)
    )
    design_rng = np.random.default_rng(np.random.SeedSequence(design_seed))

    policy = make_strategy(
        config, d, lhs_rng=lhs_rng, opt_cfg=opt_cfg, nsga_cfg=nsga_cfg,
        n_features=n_features,
    )

    result = RunResult(
        problem=problem.name,
        method=config.kind,
        q=q,
        budget=budget,
        seed=seed,
        design_seed=design_seed,
        config=_config_snapshot(config, n_features, gp_restarts),
    )

    dataset = Dataset(d=d)
    dataset.n_initial = n_init
    heap: list[tuple[float, int, PendingJob]] = []
    free_workers = list(range(q))
    submit_index = 0

    def dispatch(x_unit, branch, now):
        nonlocal submit_index
        worker = free_workers.pop(0)
        job = PendingJob(
            x=np.asarray(x_unit, float),
            submit_time=now,
            finish_time=now + sample_runtime(runtime_model, runtime_rng),
            worker_id=worker,
            branch=branch,
            submit_index=submit_index,
        )
        submit_index += 1
        heapq.heappush(heap, (job.finish_time, job.worker_id, job))

    def complete(job: PendingJob) -> float:
        nonlocal dataset
        free_workers.append(job.worker_id)
        free_workers.sort()
        x_raw = from_unit_cube(np.clip(job.x, 0.0, 1.0), problem.bounds)
        f = problem.evaluate(x_raw)
        dataset = dataset.append(np.clip(job.x, 0.0, 1.0), f)
        result.evaluations.append(
            EvalRecord(
                x_raw=[float(v) for v in x_raw],
                f_raw=float(f),
                submit_time=job.submit_time,
                finish_time=job.finish_time,
                branch=job.branch,
                submit_index=job.submit_index,
                worker_id=job.worker_id,
            )
        )
        return job.finish_time

    # Phase 1: evaluate the shared initial design.
    init_queue = [row for row in latin_hypercube(n_init, d, design_rng, 100)]
    now = 0.0
    while init_queue and free_workers:
        dispatch(init_queue.pop(0), "initial", now)
    while heap:
        _, _, job = heapq.heappop(heap)
        now = complete(job)
        if init_queue:
            dispatch(init_queue.pop(0), "initial", now)

    # Phase 2: fit on the initial design and fill all workers at once.
    prev_hp = None
    model = None
    if policy.needs_model:
        model = fit_hyperparameters(
            dataset.X, dataset.f_std, fit_rng, restarts=gp_restarts
        )
        prev_hp = model.hp
    batch_size = min(q, budget - n_init)
    for record in policy.initial_batch(model, batch_size, strategy_rng):
        dispatch(record.x, record.branch, now)

    # Phase 3: asynchronous loop; select whenever a worker frees.
    while heap:
        _, _, job = heapq.heappop(heap)
        now = complete(job)
        if submit_index < budget:
            if policy.needs_model:
                model = fit_hyperparameters(
                    dataset.X,
                    dataset.f_std,
                    fit_rng,
                    restarts=gp_restarts,
                    warm_start=prev_hp,
                )
                prev_hp = model.hp
            pending = [j.x for _, _, j in sorted(heap)]
            record = policy.select(model, pending, strategy_rng)
            dispatch(record.x, record.branch, now)

    assert len(result.evaluations) == budget
    return result


def regret_trace(result: RunResult, f_min: float) -> np.ndarray:
    """log10 simple regret after each completion, floored at 1e-12."""
    best = np.minimum.accumulate([e.f_raw for e in result.evaluations])
    if best[-1] < f_min - 1e-9:
        raise DomainError(
            f"observed value {best[-1]} beats the declared minimum {f_min}"
        )
    return np.log10(np.maximum(best - f_min, LOG_REGRET_FLOOR))
