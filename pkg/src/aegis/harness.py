"""Experiment matrices: run execution with resumption, trace persistence and
table/plot-data generation.

Seeds are derived deterministically: the initial design seed depends only on
(base seed, problem, repeat), so every method sees the same design; the run
stream seed additionally mixes in (method, q).
"""
from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .benchmarks import get_problem, problem_keys
from .exceptions import ConfigurationError
from .pathwise import DEFAULT_N_FEATURES
from .simulator import RunResult, regret_trace, run_optimisation
from .stats import ComparisonRow, MethodOutcome, best_or_equivalent, median_mad
from .strategies import STRATEGY_KINDS, EpsilonSchedule, StrategyConfig

__all__ = [
    "ExperimentConfig",
    "stable_seed",
    "trace_filename",
    "run_matrix",
    "summarize",
    "load_traces",
]


def stable_seed(*parts) -> int:
    """Deterministic 63-bit seed from arbitrary hashable parts."""
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass
class ExperimentConfig:
    problems: list[str]
    methods: list[str]
    q_values: list[int]
    repeats: int = 51
    budget: int = 200
    base_seed: int = 0
    gamma: float = 0.5
    epsilon_schedule: str = "default"
    epsilon_value: float | None = None
    n_features: int = DEFAULT_N_FEATURES
    gp_restarts: int = 10

    def __post_init__(self):
        if not self.problems:
            raise ConfigurationError("config field 'problems' must be non-empty")
        if not self.methods:
            raise ConfigurationError("config field 'methods' must be non-empty")
        if not self.q_values:
            raise ConfigurationError("config field 'q_values' must be non-empty")
        if self.repeats < 1:
            raise ConfigurationError("config field 'repeats' must be >= 1")
        known = set(problem_keys())
        for p in self.problems:
            if p not in known:
                raise ConfigurationError(f"config field 'problems': unknown {p!r}")
        for m in self.methods:
            if m not in STRATEGY_KINDS:
                raise ConfigurationError(f"config field 'methods': unknown {m!r}")

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            raw = json.load(fh)
        try:
            return cls(**raw)
        except TypeError as exc:
            raise ConfigurationError(f"invalid config {path}: {exc}") from exc

    def strategy_config(self, method: str) -> StrategyConfig:
        schedule = EpsilonSchedule(self.epsilon_schedule, self.epsilon_value)
        return StrategyConfig(kind=method, epsilon_schedule=schedule, gamma=self.gamma)


def trace_filename(problem: str, method: str, q: int, repeat: int) -> str:
    return f"{problem}_{method}_q{q}_r{repeat}.jsonl"


def _trace_ok(path: Path, budget: int) -> bool:
    try:
        result = RunResult.from_jsonl(path)
        return len(result.evaluations) == result.budget == budget
    except Exception:
        return False


def _execute_one(args) -> tuple[str, str | None]:
    """Run a single cell of the matrix; returns (filename, error or None)."""
    cfg_dict, problem_key, method, q, repeat, out_dir = args
    cfg = ExperimentConfig(**cfg_dict)
    fname = trace_filename(problem_key, method, q, repeat)
    path = Path(out_dir) / fname
    try:
        problem = get_problem(problem_key)
        result = run_optimisation(
            problem,
            cfg.strategy_config(method),
            q=q,
            budget=cfg.budget,
            seed=stable_seed(cfg.base_seed, problem_key, method, q, repeat),
            design_seed=stable_seed(cfg.base_seed, problem_key, repeat),
            n_features=cfg.n_features,
            gp_restarts=cfg.gp_restarts,
        )
        fd, tmp = tempfile.mkstemp(dir=out_dir, suffix=".tmp")
        os.close(fd)
        result.to_jsonl(tmp)
        os.replace(tmp, path)
        return fname, None
    except Exception:
        return fname, traceback.format_exc()


def run_matrix(
    cfg: ExperimentConfig,
    out_dir,
    jobs: int = 1,
    only: str | None = None,
    progress=print,
) -> dict:
    """Execute the (problem x method x q x repeat) matrix with resumption.

    Existing traces that pass an integrity check are skipped. Failed runs
    are recorded in manifest.json and the matrix continues. Returns the
    manifest dictionary.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    filt = None
    if only:
        fields = [f.strip() for f in only.split(",")]
        if len(fields) != 4:
            raise ConfigurationError("--only expects 'problem,method,q,repeat'")
        filt = fields

    cells = []
    cfg_dict = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    for problem in cfg.problems:
        for method in cfg.methods:
            for q in cfg.q_values:
                for repeat in range(cfg.repeats):
                    if filt and any(
                        f not in ("*", str(v))
                        for f, v in zip(filt, (problem, method, q, repeat))
                    ):
                        continue
                    cells.append((cfg_dict, problem, method, q, repeat, str(out_dir)))

    manifest = {"completed": [], "skipped": [], "failed": {}}
    todo = []
    for cell in cells:
        fname = trace_filename(*cell[1:5])
        if _trace_ok(out_dir / fname, cfg.budget):
            manifest["skipped"].append(fname)
        else:
            todo.append(cell)

    def record(fname, error):
        if error is None:
            manifest["completed"].append(fname)
            progress(f"done {fname}")
        else:
            manifest["failed"][fname] = error
            progress(f"FAILED {fname}")

    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for fname, error in pool.map(_execute_one, todo):
                record(fname, error)
    else:
        for cell in todo:
            record(*_execute_one(cell))

    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
    if manifest["failed"]:
        progress(
            f"WARNING: {len(manifest['failed'])} run(s) failed and are excluded "
            "from statistics; see manifest.json"
        )
    return manifest


def load_traces(results_dir) -> dict[tuple[str, int], dict[str, dict[int, RunResult]]]:
    """Group traces as {(problem, q): {method: {repeat: RunResult}}}."""
    results_dir = Path(results_dir)
    grouped: dict = {}
    for path in sorted(results_dir.glob("*.jsonl")):
        stem = path.stem
        try:
            head, r_part = stem.rsplit("_r", 1)
            rest, q_part = head.rsplit("_q", 1)
            problem, method = rest.rsplit("_", 1)
            repeat, q = int(r_part), int(q_part)
        except ValueError:
            continue
        try:
            result = RunResult.from_jsonl(path)
        except Exception:
            continue
        if len(result.evaluations) != result.budget:
            continue
        grouped.setdefault((problem, q), {}).setdefault(method, {})[repeat] = result
    return grouped


def _final_regret(result: RunResult, f_min: float) -> float:
    return max(result.best_seen() - f_min, 0.0)


def summarize(results_dir, out_dir, alpha: float = 0.05) -> dict:
    """Emit per-problem median/MAD tables with best/equivalent flags, the
    best-or-equivalent proportion per q, and per-iteration convergence
    quartiles as CSV. Returns the table data keyed by (problem, q)."""
    grouped = load_traces(results_dir)
    if not grouped:
        raise ConfigurationError(f"no valid traces found in {results_dir}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    tables = {}
    flags_by_q: dict[int, dict[str, list[bool]]] = {}
    text_lines = []

    for (problem_key, q), by_method in sorted(grouped.items()):
        f_min = get_problem(problem_key).f_min
        common = sorted(set.intersection(*(set(r) for r in by_method.values())))
        methods = sorted(by_method)
        if len(methods) >= 2 and common:
            outcomes = [
                MethodOutcome(
                    m,
                    np.array(
                        [_final_regret(by_method[m][r], f_min) for r in common]
                    ),
                )
                for m in methods
            ]
            rows = best_or_equivalent(outcomes, alpha)
        else:
            # Single method or no paired repeats: report summaries, no tests.
            rows = []
            for m in methods:
                regrets = [
                    _final_regret(res, f_min) for res in by_method[m].values()
                ]
                med, mad = median_mad(regrets)
                rows.append(ComparisonRow(m, med, mad, "best"))
        tables[(problem_key, q)] = rows

        with open(out_dir / f"table_{problem_key}_q{q}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "median", "mad", "flag", "p_value"])
            for row in rows:
                writer.writerow(
                    [row.method, repr(row.median), repr(row.mad), row.flag,
                     "" if row.p_value is None else repr(row.p_value)]
                )

        text_lines.append(f"{problem_key} (q={q}, repeats={len(common)})")
        for row in rows:
            mark = {"best": "**", "equivalent": "*", "worse": "  "}[row.flag]
            text_lines.append(
                f"  {row.method:12s} {row.median:12.4e} | {row.mad:12.4e} {mark}"
            )
        text_lines.append("")

        for row in rows:
            flags_by_q.setdefault(q, {}).setdefault(row.method, []).append(
                row.flag in ("best", "equivalent")
            )

        _write_convergence(out_dir, problem_key, q, by_method, f_min, common)

    with open(out_dir / "tables.txt", "w") as fh:
        fh.write("\n".join(text_lines))

    with open(out_dir / "proportions.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["q", "method", "best_or_equivalent_proportion"])
        for q in sorted(flags_by_q):
            for method in sorted(flags_by_q[q]):
                flags = flags_by_q[q][method]
                writer.writerow([q, method, repr(sum(flags) / len(flags))])

    return tables


def _write_convergence(out_dir, problem_key, q, by_method, f_min, common):
    methods = sorted(by_method)
    budget = min(
        len(res.evaluations) for m in methods for res in by_method[m].values()
    )
    header = ["iteration"]
    for m in methods:
        header += [f"{m}_q25", f"{m}_q50", f"{m}_q75"]
    quartiles = {}
    for m in methods:
        repeats = common if common else sorted(by_method[m])
        traces = np.stack(
            [regret_trace(by_method[m][r], f_min)[:budget] for r in repeats]
        )
        quartiles[m] = np.percentile(traces, [25, 50, 75], axis=0)
    with open(out_dir / f"convergence_{problem_key}_q{q}.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t in range(budget):
            row = [t + 1]
            for m in methods:
                row += [repr(float(quartiles[m][k, t])) for k in range(3)]
            writer.writerow(row)
