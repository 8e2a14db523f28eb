"""Shared definition of the desk-scale acceptance runs.

Both the acceptance tests and tools/generate_acceptance_traces.py use these
configs against the same cache directory, so traces are computed once and
reused through the harness's resume logic.
"""
import os
from pathlib import Path

from aegis.harness import ExperimentConfig

CACHE_DIR = Path(
    os.environ.get(
        "ACCEPTANCE_CACHE",
        Path(__file__).resolve().parents[1] / ".acceptance_cache",
    )
)

BASE_SEED = 20260823
REPEATS = 11

MATRICES = {
    "branin_q4": ExperimentConfig(
        problems=["Branin"],
        methods=["AEGiS", "TS", "Random"],
        q_values=[4],
        repeats=REPEATS,
        base_seed=BASE_SEED,
    ),
    "branin_q1": ExperimentConfig(
        problems=["Branin"],
        methods=["AEGiS", "Random"],
        q_values=[1],
        repeats=REPEATS,
        base_seed=BASE_SEED,
    ),
    "camel_q4": ExperimentConfig(
        problems=["SixHumpCamel"],
        methods=["AEGiS", "AEGiS-RS", "KB"],
        q_values=[4],
        repeats=REPEATS,
        base_seed=BASE_SEED,
    ),
    "ablation_q8": ExperimentConfig(
        problems=["Branin", "StyblinskiTang7"],
        methods=["AEGiS", "NoTS", "NoPF", "NoExploit"],
        q_values=[8],
        repeats=REPEATS,
        base_seed=BASE_SEED,
    ),
}
