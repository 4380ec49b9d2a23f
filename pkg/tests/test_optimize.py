import json
import math

import numpy as np
import pytest
import scipy.optimize
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_unitary
from trapsynth.ansatz import build_topology
from trapsynth.engine import GradientResult, Objective, SynthesisTarget
from trapsynth.optimize import (CONVERGED, LINE_SEARCH_FAILED, NON_FINITE, OptimizerConfig,
                                initial_point, line_search, LineSearchError, minimize,
                                minimize_with_restarts)


def rosenbrock(x):
    f = (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2
    g = np.array([-2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] ** 2), 200 * (x[1] - x[0] ** 2)])
    return GradientResult(f, g)


def quadratic(c):
    return lambda x: GradientResult(float((x - c) @ (x - c)), 2 * (x - c))


def test_convex_quadratic(rng):
    c = rng.normal(size=10)
    r = minimize(quadratic(c), rng.normal(size=10) * 5)
    assert r.converged
    assert np.max(np.abs(r.x - c)) < 1e-8
    assert r.iterations <= 50


def test_rosenbrock():
    r = minimize(rosenbrock, [-1.2, 1.0])
    assert r.reason == CONVERGED
    assert np.max(np.abs(r.x - 1.0)) < 1e-6


def test_rosenbrock_agrees_with_scipy():
    ref = scipy.optimize.minimize(lambda x: rosenbrock(x).cost, [-1.2, 1.0],
                                  jac=lambda x: rosenbrock(x).gradient, method="BFGS")
    ours = minimize(rosenbrock, [-1.2, 1.0])
    assert np.max(np.abs(ours.x - ref.x)) < 1e-5


def test_zero_gradient_start():
    r = minimize(quadratic(np.ones(3)), np.ones(3))
    assert r.converged and r.iterations == 0
    assert np.array_equal(r.x, np.ones(3))


def test_monotone_and_final_gradient(rng):
    t = build_topology(2, 2)
    obj = Objective(t, SynthesisTarget.unitary(random_unitary(rng, 2)))
    x0 = rng.uniform(0, 2 * np.pi, t.param_count)
    seen = [obj.cost(x0)]
    r = minimize(obj, x0, callback=lambda x, f: seen.append(f))
    assert all(b <= a for a, b in zip(seen, seen[1:]))
    assert r.cost <= seen[0]
    if r.converged:
        assert np.max(np.abs(obj(r.x).gradient)) < 1e-5


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.1, 10), min_size=2, max_size=6), st.integers(0, 2 ** 32 - 1))
def test_converged_means_small_gradient(scales, seed):
    d = np.array(scales)
    f = lambda x: GradientResult(float(np.sum(d * x ** 2 + np.cos(x))), 2 * d * x - np.sin(x))
    x0 = np.random.default_rng(seed).normal(size=d.size) * 3
    r = minimize(f, x0)
    if r.converged:
        assert np.max(np.abs(f(r.x).gradient)) < 1e-5
    assert r.cost <= f(x0).cost


def test_non_finite_objective_is_reported():
    r = minimize(lambda x: GradientResult(float("nan"), np.zeros_like(x)), np.zeros(2))
    assert r.reason == NON_FINITE


def test_line_search_failure_is_graceful():
    # gradient inconsistent with the function: every step increases the cost
    bad = lambda x: GradientResult(float(x @ x), -2 * x)
    r = minimize(bad, np.ones(2))
    assert r.reason == LINE_SEARCH_FAILED
    assert r.cost <= 2.0


def test_line_search_strong_wolfe():
    phi = lambda a: ((a - 2.0) ** 2, 2 * (a - 2.0))
    a, f = line_search(phi, 4.0, -4.0, 1.0, 1e-4, 0.9)
    assert f <= 4.0 + 1e-4 * a * -4.0
    assert abs(phi(a)[1]) <= 0.9 * 4.0
    with pytest.raises(LineSearchError):
        line_search(phi, 4.0, 1.0, 1.0, 1e-4, 0.9)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(wolfe_c1=0.9, wolfe_c2=0.5)
    with pytest.raises(ValueError):
        OptimizerConfig(grad_tol=0)
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)
    cfg = OptimizerConfig(seed=5, success_cost=1e-9)
    assert OptimizerConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_initial_points_deterministic_and_in_range():
    cfg = OptimizerConfig(seed=3)
    a = initial_point(20, cfg, 4)
    assert np.array_equal(a, initial_point(20, cfg, 4))
    assert not np.array_equal(a, initial_point(20, cfg, 5))
    assert np.all((a >= 0) & (a < 2 * math.pi))


@pytest.fixture
def synth_problem(rng):
    t = build_topology(2, 3)
    return t, Objective(t, SynthesisTarget.unitary(random_unitary(rng, 2)))


def test_single_restart_equals_minimize(synth_problem):
    t, obj = synth_problem
    cfg = OptimizerConfig(restarts=1, seed=11)
    run = minimize_with_restarts(obj, t, cfg)
    direct = minimize(obj, initial_point(t.param_count, cfg, 0), cfg)
    assert np.array_equal(run.best_x, direct.x)
    assert run.best_cost == direct.cost and run.iterations == direct.iterations


def test_restarts_deterministic_across_threads(synth_problem):
    t, obj = synth_problem
    cfg = OptimizerConfig(restarts=6, seed=2)
    runs = [minimize_with_restarts(obj, t, cfg, threads=th) for th in (1, 1, 3)]
    blobs = [json.dumps(r.to_dict(timing=False)).encode() for r in runs]
    assert blobs[0] == blobs[1] == blobs[2]
    assert runs[0].best_cost == min(r.cost for r in runs[0].per_restart)


def test_success_cost_stops_early(synth_problem):
    t, obj = synth_problem
    cfg = OptimizerConfig(restarts=10, seed=2, success_cost=1e-8)
    r1 = minimize_with_restarts(obj, t, cfg, threads=1)
    r4 = minimize_with_restarts(obj, t, cfg, threads=4)
    assert len(r1.per_restart) < 10
    assert r1.to_dict(timing=False) == r4.to_dict(timing=False)
    assert r1.best_cost < 1e-8


def test_all_restarts_aborted():
    with pytest.raises(RuntimeError):
        minimize_with_restarts(lambda x: GradientResult(float("inf"), x), 3, OptimizerConfig(restarts=2))
