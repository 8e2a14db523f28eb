"""Asynchronous epsilon-greedy Bayesian optimisation.

Combines greedy surrogate exploitation, pathwise Thompson sampling and
random selection from the exploration-exploitation Pareto set, together
with baselines, a deterministic asynchronous-worker simulator, benchmark
functions and a statistical evaluation pipeline.
"""

__version__ = "0.1.0"
