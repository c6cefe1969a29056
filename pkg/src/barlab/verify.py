"""Independent brute-force oracles for the mirror-descent machinery, plus the
runnable verification suites behind `barlab verify`.

The oracles here never call the root-finding projection; they minimize the
projection objective directly on dense simplex grids, so agreement is a real
two-route check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import RngStream, hard_instance
from .kl import CheckResult, check_kl_properties
from .osmd import OsmdConfig, SimplexDistribution, init_distribution, mirror_step, run_osmd

__all__ = [
    "mirror_objective",
    "grid_minimize_mirror",
    "grid_minimize_potential_3",
    "check_osmd_properties",
    "run_verify",
]


def mirror_objective(p: np.ndarray, q: np.ndarray, est: np.ndarray, eta: float) -> np.ndarray:
    """<p, est> + B_F(p, q)/eta with F(p) = -2*sum(sqrt(p)); p may be a batch
    with points along the last axis."""
    p = np.asarray(p, dtype=np.float64)
    sqrt_p = np.sqrt(np.maximum(p, 0.0))
    bregman = -2.0 * sqrt_p.sum(axis=-1) + 2.0 * np.sqrt(q).sum() + ((p - q) / np.sqrt(q)).sum(axis=-1)
    return (p * est).sum(axis=-1) + bregman / eta


def _grid_min_2(q: np.ndarray, est: np.ndarray, eta: float, points: int = 1_000_001) -> np.ndarray:
    t = np.linspace(0.0, 1.0, points)
    p = np.stack([t, 1.0 - t], axis=-1)
    values = mirror_objective(p, q, est, eta)
    return p[int(np.argmin(values))]


def _grid_min_3(q: np.ndarray, est: np.ndarray, eta: float) -> np.ndarray:
    """Hierarchical zoom grid over the 3-simplex; the objective is convex, so
    the continuum minimizer lies within one cell of each level's argmin."""
    lo1, hi1, lo2, hi2 = 0.0, 1.0, 0.0, 1.0
    step = 5e-3
    best = None
    for _ in range(4):
        a = np.arange(max(lo1, 0.0), min(hi1, 1.0) + step / 2, step)
        b = np.arange(max(lo2, 0.0), min(hi2, 1.0) + step / 2, step)
        g1, g2 = np.meshgrid(a, b, indexing="ij")
        mask = g1 + g2 <= 1.0 + 1e-12
        p1 = g1[mask]
        p2 = g2[mask]
        p = np.stack([p1, p2, np.maximum(1.0 - p1 - p2, 0.0)], axis=-1)
        values = mirror_objective(p, q, est, eta)
        best = p[int(np.argmin(values))]
        lo1, hi1 = best[0] - 2 * step, best[0] + 2 * step
        lo2, hi2 = best[1] - 2 * step, best[1] + 2 * step
        step /= 20.0
    return best


def grid_minimize_mirror(q: np.ndarray, est: np.ndarray, eta: float) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    est = np.asarray(est, dtype=np.float64)
    if q.size == 2:
        return _grid_min_2(q, est, eta)
    if q.size == 3:
        return _grid_min_3(q, est, eta)
    raise ValueError("grid oracle supports 2- and 3-arm problems only")


def grid_minimize_potential_3(step: float = 1e-3) -> np.ndarray:
    """Brute-force argmin of F(q) = -2*sum(sqrt(q)) over the 3-simplex."""
    a = np.arange(0.0, 1.0 + step / 2, step)
    g1, g2 = np.meshgrid(a, a, indexing="ij")
    mask = g1 + g2 <= 1.0 + 1e-12
    p1 = g1[mask]
    p2 = g2[mask]
    p3 = np.maximum(1.0 - p1 - p2, 0.0)
    values = -2.0 * (np.sqrt(p1) + np.sqrt(p2) + np.sqrt(p3))
    i = int(np.argmin(values))
    return np.array([p1[i], p2[i], p3[i]])


def _random_triple(gen: np.random.Generator, k: int) -> tuple[SimplexDistribution, np.ndarray, float]:
    raw = gen.uniform(0.05, 1.0, size=k)
    q = SimplexDistribution(weights=raw / raw.sum())
    est = gen.uniform(-3.0, 3.0, size=k)
    eta = float(10.0 ** gen.uniform(-2.0, 0.0))
    return q, est, eta


def check_osmd_properties(seed: int = 0, triples_per_size: int = 50) -> list[CheckResult]:
    """Mirror-descent verification suite: grid-oracle agreement, simplex
    invariants after random steps, the uniform start point, and run
    determinism."""
    results: list[CheckResult] = []
    gen = np.random.Generator(np.random.Philox(key=seed))

    for k in (2, 3):
        worst = 0.0
        for _ in range(triples_per_size):
            q, est, eta = _random_triple(gen, k)
            stepped = mirror_step(q, est, eta)
            oracle = grid_minimize_mirror(q.weights, est, eta)
            worst = max(worst, float(np.abs(stepped.weights - oracle).max()))
        results.append(
            CheckResult(
                name=f"mirror-step-grid-oracle-{k}arm",
                passed=worst <= 1e-5,
                detail=f"{triples_per_size} triples, worst coordinate error {worst:.3e}",
            )
        )

    worst_sum = 0.0
    min_weight = math.inf
    for _ in range(1000):
        k = int(gen.integers(2, 8))
        q, est, eta = _random_triple(gen, k)
        stepped = mirror_step(q, est, eta)
        worst_sum = max(worst_sum, abs(float(stepped.weights.sum()) - 1.0))
        min_weight = min(min_weight, float(stepped.weights.min()))
    results.append(
        CheckResult(
            name="mirror-step-simplex-invariants",
            passed=worst_sum <= 1e-9 and min_weight > 0.0,
            detail=f"1000 steps, worst |sum-1| {worst_sum:.3e}, min weight {min_weight:.3e}",
        )
    )

    uniform_err = float(np.abs(grid_minimize_potential_3() - 1.0 / 3.0).max())
    results.append(
        CheckResult(
            name="uniform-start-potential-argmin",
            passed=np.allclose(init_distribution(3).weights, 1.0 / 3.0)
            and uniform_err <= 2e-3,
            detail=f"grid argmin within {uniform_err:.3e} of uniform",
        )
    )

    inst = hard_instance(5, 0.1)
    first = run_osmd([1, 2, 3, 4, 5], 2000, inst, OsmdConfig(), RngStream(seed, 1))
    second = run_osmd([1, 2, 3, 4, 5], 2000, inst, OsmdConfig(), RngStream(seed, 1))
    same = bool(
        np.array_equal(first.pulls, second.pulls)
        and first.cumulative_reward == second.cumulative_reward
    )
    results.append(
        CheckResult(
            name="run-determinism-same-stream",
            passed=same,
            detail="identical pull counts and rewards on replayed stream",
        )
    )
    return results


def run_verify(which: str, seed: int = 0) -> list[CheckResult]:
    """Run the named verification suite(s): 'kl', 'osmd', or 'all'."""
    if which == "kl":
        return check_kl_properties(seed=seed)
    if which == "osmd":
        return check_osmd_properties(seed=seed)
    if which == "all":
        return check_kl_properties(seed=seed) + check_osmd_properties(seed=seed)
    raise ValueError(f"unknown verify target {which!r}; expected kl, osmd, or all")
