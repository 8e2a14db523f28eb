import zlib

import numpy as np
import pytest

from aegis.benchmarks import PROBLEM_TABLE, get_problem, make_problem, problem_keys
from aegis.exceptions import ConfigurationError, DomainError

EXPECTED = {
    "Branin": 2,
    "Eggholder": 2,
    "GoldsteinPrice": 2,
    "SixHumpCamel": 2,
    "Hartmann3": 3,
    "Ackley5": 5,
    "Michalewicz5": 5,
    "StyblinskiTang5": 5,
    "Hartmann6": 6,
    "Rosenbrock7": 7,
    "StyblinskiTang7": 7,
    "Ackley10": 10,
    "Michalewicz10": 10,
    "Rosenbrock10": 10,
    "StyblinskiTang10": 10,
}


def test_registry_contents():
    keys = problem_keys()
    assert len(keys) == 15
    assert set(keys) == set(EXPECTED)
    for key, d in EXPECTED.items():
        assert get_problem(key).d == d
    assert len(PROBLEM_TABLE) == 15


def test_unknown_problem_raises():
    with pytest.raises(ConfigurationError):
        get_problem("Nonexistent")
    with pytest.raises(ConfigurationError):
        make_problem("Ackley", 3)


@pytest.mark.parametrize("key", sorted(EXPECTED))
def test_minimisers_attain_minimum(key):
    p = get_problem(key)
    assert len(p.x_min) >= 1
    for x in p.x_min:
        assert p.bounds.contains(x, atol=1e-9)
        assert p.evaluate(x) == pytest.approx(p.f_min, abs=1e-6)


@pytest.mark.parametrize("key", sorted(EXPECTED))
def test_random_probes_never_beat_minimum(key):
    p = get_problem(key)
    rng = np.random.default_rng(zlib.crc32(key.encode()))
    X = rng.uniform(p.bounds.lower, p.bounds.upper, size=(100_000, p.d))
    vals = np.array([p.evaluate(x) for x in X])
    assert np.all(np.isfinite(vals))
    assert vals.min() >= p.f_min - 1e-9


def test_known_values():
    branin = get_problem("Branin")
    assert branin.evaluate([np.pi, 2.275]) == pytest.approx(0.39788735772973816,
                                                            abs=1e-8)
    gp = get_problem("GoldsteinPrice")
    assert gp.evaluate([0.0, -1.0]) == pytest.approx(3.0, abs=1e-9)
    camel = get_problem("SixHumpCamel")
    assert camel.evaluate([0.0898, -0.7126]) == pytest.approx(-1.0316, abs=1e-4)
    ackley = get_problem("Ackley5")
    assert ackley.evaluate(np.zeros(5)) == pytest.approx(0.0, abs=1e-12)
    rosen = get_problem("Rosenbrock10")
    assert rosen.evaluate(np.ones(10)) == 0.0
    st = get_problem("StyblinskiTang7")
    x = np.full(7, -2.903534)
    assert st.evaluate(x) == pytest.approx(-39.16617 * 7, abs=1e-2)
    egg = get_problem("Eggholder")
    assert egg.evaluate([512.0, 404.2319]) == pytest.approx(-959.6407, abs=1e-3)


def test_domain_enforced():
    p = get_problem("Branin")
    with pytest.raises(DomainError):
        p.evaluate([100.0, 0.0])
    with pytest.raises(DomainError):
        p.evaluate([0.0, 0.0, 0.0])


def test_evaluate_unit_matches_raw():
    p = get_problem("Hartmann6")
    rng = np.random.default_rng(1)
    for _ in range(20):
        u = rng.uniform(size=6)
        x = p.bounds.lower + u * (p.bounds.upper - p.bounds.lower)
        assert p.evaluate_unit(u) == pytest.approx(p.evaluate(x), rel=1e-12)


def test_scaling_with_dimension():
    # The d-suffixed families must be the same formula at every d.
    for fam, dims in [("Ackley", (5, 10)), ("StyblinskiTang", (5, 7, 10))]:
        vals = []
        for d in dims:
            p = get_problem(f"{fam}{d}")
            vals.append(p.evaluate(np.full(d, 1.0)))
        if fam == "StyblinskiTang":
            # Separable: value per coordinate is constant.
            per_coord = [v / d for v, d in zip(vals, dims)]
            assert max(per_coord) - min(per_coord) < 1e-9
