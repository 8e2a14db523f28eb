"""Regenerate src/aegis/_minima.py.

For every registered benchmark this verifies the global minimum through the
implemented formula:

* evaluate at published minimisers,
* refine 1000 random multistart L-BFGS-B runs,
* for separable functions (Michalewicz, StyblinskiTang) solve each
  coordinate on a dense grid with local refinement,
* for Eggholder scan a dense 2-d grid and refine the best cells.

The lowest value found is frozen, together with the known distinct
minimisers (refined locally so the frozen value is attained at each).
"""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
from scipy.optimize import minimize, minimize_scalar

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from aegis import benchmarks as bm  # noqa: E402

RNG = np.random.default_rng(20260823)

PUBLISHED = {
    "Branin": [
        (-np.pi, 12.275),
        (np.pi, 2.275),
        (9.42478, 2.475),
    ],
    "Eggholder": [(512.0, 404.2319)],
    "GoldsteinPrice": [(0.0, -1.0)],
    "SixHumpCamel": [(0.0898, -0.7126), (-0.0898, 0.7126)],
    "Hartmann3": [(0.114614, 0.555649, 0.852547)],
    "Hartmann6": [(0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573)],
}


def refine(obj, lower, upper, x0, maxiter=2000):
    res = minimize(
        lambda x: obj(np.asarray(x)),
        np.clip(x0, lower, upper),
        method="L-BFGS-B",
        bounds=list(zip(lower, upper)),
        options={"maxiter": maxiter},
    )
    return res.x, float(res.fun)


def separable_min(g_i, lower, upper, d):
    """Global minimum of sum_i g(i, x_i) via per-coordinate dense search."""
    xs, total = [], 0.0
    grid = np.linspace(lower, upper, 200001)
    for i in range(1, d + 1):
        vals = g_i(i, grid)
        j = int(np.argmin(vals))
        a = grid[max(j - 2, 0)]
        b = grid[min(j + 2, grid.size - 1)]
        res = minimize_scalar(lambda x: float(g_i(i, np.array([x]))[0]), bounds=(a, b), method="bounded",
                              options={"xatol": 1e-14})
        xs.append(float(res.x))
        total += float(res.fun)
    return np.array(xs), total


def main():
    out = {}
    for name, d in bm.PROBLEM_TABLE:
        obj, lower, upper = bm._SPECS[(name, d)]
        lower, upper = np.array(lower), np.array(upper)
        key = f"{name}{d}" if name in bm._MULTI_DIM else name

        candidates = []

        for p in PUBLISHED.get(name, []):
            x, f = refine(obj, lower, upper, np.array(p))
            candidates.append((x, f))

        if name == "Ackley":
            candidates.append((np.zeros(d), obj(np.zeros(d))))
        if name == "Rosenbrock":
            candidates.append((np.ones(d), obj(np.ones(d))))

        if name == "Michalewicz":
            g = lambda i, x: -np.sin(x) * np.sin(i * x**2 / np.pi) ** (
                2 * bm.MICHALEWICZ_STEEPNESS
            )
            x, f = separable_min(g, 0.0, np.pi, d)
            candidates.append((x, f))
        if name == "StyblinskiTang":
            g = lambda i, x: 0.5 * (x**4 - 16.0 * x**2 + 5.0 * x)
            x, f = separable_min(g, -5.0, 5.0, d)
            candidates.append((x, f))
        if name == "Eggholder":
            n = 2001
            g1, g2 = np.meshgrid(
                np.linspace(lower[0], upper[0], n), np.linspace(lower[1], upper[1], n)
            )
            vals = np.array(
                [obj(np.array([a, b])) for a, b in zip(g1.ravel(), g2.ravel())]
            )
            for j in np.argsort(vals)[:50]:
                x0 = np.array([g1.ravel()[j], g2.ravel()[j]])
                candidates.append(refine(obj, lower, upper, x0))

        # multistart cross-check
        for _ in range(1000):
            x0 = RNG.uniform(lower, upper)
            candidates.append(refine(obj, lower, upper, x0, maxiter=500))

        f_min = float(min(f for _, f in candidates))
        minimisers = []
        for x, f in candidates:
            if f <= f_min + 1e-6 and not any(
                np.linalg.norm(x - np.array(m)) < 1e-2 for m in minimisers
            ):
                minimisers.append([float(v) for v in x])

        out[key] = (f_min, minimisers)
        print(f"{key:20s} f_min={f_min:.10g}  ({len(minimisers)} minimiser(s))")

    path = Path(__file__).resolve().parents[1] / "src" / "aegis" / "_minima.py"
    with open(path, "w") as fh:
        fh.write('"""Frozen benchmark minima. Generated by tools/verify_minima.py;\n')
        fh.write("do not edit by hand.\"\"\"\n\n")
        fh.write("FROZEN_MINIMA = {\n")
        for key, (f_min, minimisers) in out.items():
            fh.write(f"    {key!r}: (\n        {f_min!r},\n        [\n")
            for m in minimisers:
                fh.write(f"            {m!r},\n")
            fh.write("        ],\n    ),\n")
        fh.write("}\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
