"""BFGS with a strong-Wolfe line search, plus a seeded multi-restart driver."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .engine import GradientResult

CONVERGED = "converged"
MAX_ITERATIONS = "max_iterations"
LINE_SEARCH_FAILED = "line_search_failed"
NON_FINITE = "non_finite"

_RNG_PURPOSE_RESTART = 1


@dataclass(frozen=True)
class OptimizerConfig:
    grad_tol: float = 1e-5
    max_iterations: int = 10000
    restarts: int = 10
    seed: int = 0
    wolfe_c1: float = 1e-4
    wolfe_c2: float = 0.9
    init_range: tuple[float, float] = (0.0, 2 * math.pi)
    grad_norm: float = math.inf
    # stop launching restarts once one ends below this cost (None: run them all)
    success_cost: float | None = None

    def __post_init__(self):
        if not 0 < self.wolfe_c1 < self.wolfe_c2 < 1:
            raise ValueError("need 0 < wolfe_c1 < wolfe_c2 < 1")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")
        if self.max_iterations < 1 or self.restarts < 1:
            raise ValueError("max_iterations and restarts must be positive")
        lo, hi = self.init_range
        if not hi > lo:
            raise ValueError("init_range must be a nonempty interval")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["init_range"] = list(self.init_range)
        d["grad_norm"] = "inf" if math.isinf(self.grad_norm) else self.grad_norm
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "OptimizerConfig":
        d = dict(d)
        d["init_range"] = tuple(d["init_range"])
        d["grad_norm"] = float(d["grad_norm"])
        return cls(**d)


@dataclass
class RestartResult:
    x: np.ndarray
    cost: float
    iterations: int
    reason: str
    n_evals: int = 0
    wall_time: float = 0.0

    @property
    def converged(self) -> bool:
        return self.reason == CONVERGED

    def summary(self, timing: bool = True) -> dict:
        d = {"final_cost": self.cost, "iterations": self.iterations,
             "reason": self.reason, "n_evals": self.n_evals}
        if timing:
            d["wall_time_s"] = self.wall_time
        return d


@dataclass
class OptimizationRun:
    best_x: np.ndarray
    best_cost: float
    iterations: int
    converged: bool
    best_restart: int
    per_restart: list[RestartResult] = field(default_factory=list)

    @property
    def time_per_iteration(self) -> float:
        its = sum(r.iterations for r in self.per_restart)
        return sum(r.wall_time for r in self.per_restart) / max(its, 1)

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "best_x": [float(v) for v in self.best_x],
            "best_cost": self.best_cost,
            "iterations": self.iterations,
            "converged": self.converged,
            "best_restart": self.best_restart,
            "per_restart": [r.summary(timing) for r in self.per_restart],
        }


class LineSearchError(RuntimeError):
    pass


def _cubicmin(a, fa, fpa, b, fb, c, fc):
    # minimizer of the cubic through (a, fa, fpa), (b, fb), (c, fc)
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            C = fpa
            db = b - a
            dc = c - a
            denom = (db * dc) ** 2 * (db - dc)
            d1 = np.array([[dc ** 2, -db ** 2], [-dc ** 3, db ** 3]])
            A, B = d1 @ np.array([fb - fa - C * db, fc - fa - C * dc]) / denom
            radical = B * B - 3 * A * C
            xmin = a + (-B + np.sqrt(radical)) / (3 * A)
        except (ArithmeticError, FloatingPointError):
            return None
    return xmin if np.isfinite(xmin) else None


def _quadmin(a, fa, fpa, b, fb):
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            db = b - a
            B = (fb - fa - fpa * db) / (db * db)
            xmin = a - fpa / (2.0 * B)
        except (ArithmeticError, FloatingPointError):
            return None
    return xmin if np.isfinite(xmin) else None


def line_search(phi: Callable[[float], tuple[float, float]], phi0: float, dphi0: float,
                alpha1: float, c1: float, c2: float, max_iter: int = 30,
                amax: float = 1e10):
    """Find a step satisfying the strong Wolfe conditions.

    ``phi(alpha)`` returns ``(value, derivative)`` along the search direction.
    Returns ``(alpha, value)``; raises :class:`LineSearchError` on failure.
    Bracketing followed by a cubic/quadratic-interpolation zoom.
    """
    if not dphi0 < 0:
        raise LineSearchError("not a descent direction")
    a_prev, f_prev, d_prev = 0.0, phi0, dphi0
    a_cur = min(alpha1, amax)
    for i in range(max_iter):
        f_cur, d_cur = phi(a_cur)
        if not (np.isfinite(f_cur) and np.isfinite(d_cur)):
            a_cur = 0.5 * (a_prev + a_cur)
            continue
        if f_cur > phi0 + c1 * a_cur * dphi0 or (i > 0 and f_cur >= f_prev):
            return _zoom(phi, a_prev, a_cur, f_prev, f_cur, d_prev, phi0, dphi0, c1, c2)
        if abs(d_cur) <= -c2 * dphi0:
            return a_cur, f_cur
        if d_cur >= 0:
            return _zoom(phi, a_cur, a_prev, f_cur, f_prev, d_cur, phi0, dphi0, c1, c2)
        a_prev, f_prev, d_prev = a_cur, f_cur, d_cur
        a_cur = min(2.0 * a_cur, amax)
    raise LineSearchError("bracketing phase did not terminate")


def _zoom(phi, a_lo, a_hi, f_lo, f_hi, d_lo, phi0, dphi0, c1, c2, max_iter=30):
    a_rec, f_rec = 0.0, phi0
    for i in range(max_iter):
        lo, hi = sorted((a_lo, a_hi))
        width = hi - lo
        if width <= 1e-16 * max(1.0, hi):
            break
        a_j = None
        if i > 0:
            a_j = _cubicmin(a_lo, f_lo, d_lo, a_hi, f_hi, a_rec, f_rec)
            if a_j is not None and not lo + 0.2 * width < a_j < hi - 0.2 * width:
                a_j = None
        if a_j is None:
            a_j = _quadmin(a_lo, f_lo, d_lo, a_hi, f_hi)
            if a_j is None or not lo + 0.1 * width < a_j < hi - 0.1 * width:
                a_j = lo + 0.5 * width
        f_j, d_j = phi(a_j)
        if not np.isfinite(f_j):
            a_rec, f_rec = a_hi, f_hi
            a_hi, f_hi = a_j, np.inf
            continue
        if f_j > phi0 + c1 * a_j * dphi0 or f_j >= f_lo:
            a_rec, f_rec = a_hi, f_hi
            a_hi, f_hi = a_j, f_j
        else:
            if abs(d_j) <= -c2 * dphi0:
                return a_j, f_j
            if d_j * (a_hi - a_lo) >= 0:
                a_rec, f_rec = a_hi, f_hi
                a_hi, f_hi = a_lo, f_lo
            else:
                a_rec, f_rec = a_lo, f_lo
            a_lo, f_lo, d_lo = a_j, f_j, d_j
    raise LineSearchError("zoom phase did not terminate")


def _norm(g, order):
    return float(np.max(np.abs(g))) if math.isinf(order) else float(np.linalg.norm(g, order))


def minimize(objective: Callable[[np.ndarray], GradientResult], x0,
             cfg: OptimizerConfig = OptimizerConfig(), callback=None) -> RestartResult:
    """Run BFGS from ``x0`` until the gradient norm drops below ``cfg.grad_tol``.

    The inverse Hessian starts as the identity. Non-finite objective values
    abort the run (reported via ``reason``, not raised). ``callback(x, cost)``
    is called after every accepted step.
    """
    t0 = time.perf_counter()
    x = np.array(x0, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("x0 must be finite")
    n_evals = 0

    def evaluate(z):
        nonlocal n_evals
        n_evals += 1
        r = objective(z)
        return float(r.cost), np.asarray(r.gradient, dtype=np.float64)

    f, g = evaluate(x)
    if not (np.isfinite(f) and np.all(np.isfinite(g))):
        return RestartResult(x, f, 0, NON_FINITE, n_evals, time.perf_counter() - t0)

    dim = x.size
    Hinv = np.eye(dim)
    f_old = f + np.linalg.norm(g) / 2
    reason = MAX_ITERATIONS
    it = 0
    while True:
        if _norm(g, cfg.grad_norm) < cfg.grad_tol:
            reason = CONVERGED
            break
        if it >= cfg.max_iterations:
            break
        p = -Hinv @ g
        dphi0 = float(g @ p)
        if not dphi0 < 0:
            Hinv = np.eye(dim)
            p = -g
            dphi0 = float(g @ p)
        cache = {}

        def phi(alpha):
            z = x + alpha * p
            fz, gz = evaluate(z)
            cache[alpha] = (z, fz, gz)
            return fz, float(gz @ p)

        alpha1 = min(1.0, 1.01 * 2 * (f - f_old) / dphi0) if f_old > f else 1.0
        if alpha1 <= 0:
            alpha1 = 1.0
        try:
            alpha, _ = line_search(phi, f, dphi0, alpha1, cfg.wolfe_c1, cfg.wolfe_c2)
        except LineSearchError:
            reason = LINE_SEARCH_FAILED
            break
        x_new, f_new, g_new = cache[alpha]
        if not (np.isfinite(f_new) and np.all(np.isfinite(g_new))):
            reason = NON_FINITE
            break
        s = x_new - x
        y = g_new - g
        x, f_old, f, g = x_new, f, f_new, g_new
        it += 1
        if callback is not None:
            callback(x, f)
        sy = float(s @ y)
        if sy > 0:
            rho = 1.0 / sy
            Hy = Hinv @ y
            Hinv += (rho * rho * (sy + float(y @ Hy))) * np.outer(s, s) \
                - rho * (np.outer(Hy, s) + np.outer(s, Hy))
    return RestartResult(x, f, it, reason, n_evals, time.perf_counter() - t0)


def restart_rng(seed: int, restart: int, stream: int = 0) -> np.random.Generator:
    """Generator for restart ``restart``; depends only on its index, never on scheduling."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(_RNG_PURPOSE_RESTART, stream, restart))
    return np.random.Generator(np.random.PCG64(ss))


def initial_point(param_count: int, cfg: OptimizerConfig, restart: int, stream: int = 0) -> np.ndarray:
    lo, hi = cfg.init_range
    return restart_rng(cfg.seed, restart, stream).uniform(lo, hi, param_count)


def minimize_with_restarts(objective, param_count: int, cfg: OptimizerConfig = OptimizerConfig(),
                           threads: int = 1, stream: int = 0) -> OptimizationRun:
    """Best of ``cfg.restarts`` BFGS runs from seeded uniform starting points.

    ``param_count`` may also be a topology (anything with ``param_count``).
    Results are identical for every ``threads`` value: restarts are consumed
    in index order, and with ``cfg.success_cost`` set, everything after the
    first restart that reaches it is discarded.
    """
    param_count = getattr(param_count, "param_count", param_count)

    def one(r):
        return minimize(objective, initial_point(param_count, cfg, r, stream), cfg)

    results: list[RestartResult] = []
    done = False
    batch = max(1, int(threads))
    pool = ThreadPoolExecutor(batch) if batch > 1 else None
    try:
        for start in range(0, cfg.restarts, batch):
            idx = range(start, min(start + batch, cfg.restarts))
            out = list(pool.map(one, idx)) if pool else [one(r) for r in idx]
            for res in out:
                results.append(res)
                if cfg.success_cost is not None and res.cost < cfg.success_cost:
                    done = True
                    break
            if done:
                break
    finally:
        if pool:
            pool.shutdown()

    ok = [i for i, r in enumerate(results) if r.reason != NON_FINITE]
    if not ok:
        raise RuntimeError("every restart aborted with non-finite objective values")
    best = min(ok, key=lambda i: results[i].cost)
    b = results[best]
    return OptimizationRun(b.x, b.cost, b.iterations, b.converged, best, results)
