"""Bernoulli KL divergence and executable checkers for the inequalities the
retention guarantees rest on.

Conventions: natural log everywhere; 0*log(0) = 0; d(x, y) = +inf when y is 0
or 1 while x is not (the distributions are mutually singular there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "bernoulli_kl",
    "KlBoundPair",
    "kl_sum_lower_bound",
    "bar_kl_lower_bound",
    "bai_kl_value",
    "bai_kl_ratio",
    "BAI_RATIO_FLOOR",
    "log_inequalities_check",
    "CheckResult",
    "check_kl_properties",
]

# Infimum of bai_kl_ratio over the desk-scale domain n in [3, 1e4],
# delta in [0.01, 1 - 2/n], from a dense scan: every per-n minimum sits on the
# delta = 1 - 2/n boundary and decreases in n, so the corner n = 1e4 is the
# global minimum. The linear lower bound holds with at least this constant.
BAI_RATIO_FLOOR = 0.13697878722992818


def bernoulli_kl(x: float, y: float) -> float:
    """d(x, y) = x*log(x/y) + (1-x)*log((1-x)/(1-y)), extended-real."""
    x = float(x)
    y = float(y)
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise ValueError(f"arguments must lie in [0, 1], got ({x}, {y})")
    if x == y:
        return 0.0
    if y == 0.0 or y == 1.0:
        # x != y, so some mass of x falls where y has none.
        return math.inf
    if x == 0.0:
        return -math.log1p(-y)
    if x == 1.0:
        return -math.log(y)
    return x * math.log(x / y) + (1.0 - x) * math.log((1.0 - x) / (1.0 - y))


def _kl_interior(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized d(x, y) for y strictly inside (0, 1); x may touch 0 or 1."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        left = np.where(x > 0.0, x * np.log(x / y), 0.0)
        right = np.where(x < 1.0, (1.0 - x) * np.log((1.0 - x) / (1.0 - y)), 0.0)
    return left + right


@dataclass(frozen=True)
class KlBoundPair:
    """A (lhs, rhs) pair with lhs >= rhs as the claimed inequality."""

    lhs: float
    rhs: float

    def holds(self, slack: float = 1e-12) -> bool:
        return self.lhs >= self.rhs - slack


def kl_sum_lower_bound(xs: Sequence[float], b: float) -> KlBoundPair:
    """sum over x_i < b of d(x_i, b) versus n*d(mean(xs), b).

    Requires mean(xs) < b <= 1 and all x_i in [0, 1].
    """
    arr = np.asarray(xs, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("xs must be a non-empty 1-d sequence")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("all x_i must lie in [0, 1]")
    b = float(b)
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"b must lie in [0, 1], got {b}")
    a = float(arr.mean())
    if not a < b:
        raise ValueError(f"mean(xs) = {a} must be strictly below b = {b}")
    lhs = float(sum(bernoulli_kl(float(x), b) for x in arr if x < b))
    rhs = arr.size * bernoulli_kl(a, b)
    return KlBoundPair(lhs=lhs, rhs=rhs)


def bar_kl_lower_bound(a: float, b: float) -> KlBoundPair:
    """d(b, a) versus (1 - 1/(1 + r/(2+r))) * b * log(b/a) with r = (b-a)/a.

    Requires 0 < a < b < 1.
    """
    a = float(a)
    b = float(b)
    if not (0.0 < a < b < 1.0):
        raise ValueError(f"need 0 < a < b < 1, got (a={a}, b={b})")
    r = (b - a) / a
    rhs = (1.0 - 1.0 / (1.0 + r / (2.0 + r))) * b * math.log(b / a)
    return KlBoundPair(lhs=bernoulli_kl(b, a), rhs=rhs)


def bai_kl_value(delta: float, n: int) -> float:
    """d((1-delta)/2 + 1/(2n), 1-delta): the divergence a delta-correct
    identification strategy must generate on some arm among n.

    Requires (1-delta) >= 1/n; at equality the two arguments coincide and the
    value degenerates to 0.
    """
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    p = 1.0 - delta
    if p < 1.0 / n:
        raise ValueError(f"need (1-delta) >= 1/n, got {p} < {1.0 / n}")
    return bernoulli_kl(p / 2.0 + 1.0 / (2.0 * n), p)


def bai_kl_ratio(delta: float, n: int) -> float:
    """bai_kl_value over its argument gap (1-delta)/2 - 1/(2n); the gap must be
    positive. Bounded below by BAI_RATIO_FLOOR on the calibrated domain."""
    gap = (1.0 - float(delta)) / 2.0 - 1.0 / (2.0 * n)
    if gap <= 0.0:
        raise ValueError(f"argument gap must be positive, got {gap}")
    return bai_kl_value(delta, n) / gap


def log_inequalities_check(x: float, slack: float = 1e-12) -> bool:
    """True when every applicable branch of the log bounds holds at x:

    (a) log(1+x) >= x/(1+x)              for x > -1
    (b) log(1+x) >= 2x/(2+x)             for x > 0
    (c) log(1+x) >= (x/(1+x)) * (2+x)/2  for -1 < x <= 0
    """
    x = float(x)
    if not x > -1.0:
        raise ValueError(f"x must exceed -1, got {x}")
    lhs = math.log1p(x)
    if lhs < x / (1.0 + x) - slack:
        return False
    if x > 0.0 and lhs < 2.0 * x / (2.0 + x) - slack:
        return False
    if x <= 0.0 and lhs < (x / (1.0 + x)) * ((2.0 + x) / 2.0) - slack:
        return False
    return True


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        suffix = f"  ({self.detail})" if self.detail else ""
        return f"[{status}] {self.name}{suffix}"


def _interior_grid(step: float = 0.01) -> np.ndarray:
    k = round(1.0 / step)
    return np.arange(1, k) * step


def check_kl_properties(
    seed: int = 0,
    draws: int = 10_000,
    grid_step: float = 0.01,
    slack: float = 1e-12,
) -> list[CheckResult]:
    """Run every KL-side inequality as an executable check.

    Exhaustive interior grids at `grid_step` plus `draws` random points per
    property. Returns one CheckResult per property; all should pass.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    results: list[CheckResult] = []
    grid = _interior_grid(grid_step)

    def record(name: str, violations: int, total: int, worst: float) -> None:
        results.append(
            CheckResult(
                name=name,
                passed=violations == 0,
                detail=f"{total} points, {violations} violations, worst margin {worst:.3e}",
            )
        )

    # Nonnegativity and identity on the full closed grid (plus endpoints).
    pts = np.concatenate(([0.0], grid, [1.0]))
    viol = 0
    worst = math.inf
    for x in pts:
        for y in pts:
            d = bernoulli_kl(float(x), float(y))
            if d < -slack or (x == y and d != 0.0):
                viol += 1
            if math.isfinite(d):
                worst = min(worst, d)
    record("kl-nonnegativity-identity", viol, pts.size**2, worst)

    # Joint convexity in each argument separately (random, interior y to keep
    # values finite).
    viol = 0
    worst = math.inf
    for _ in range(draws):
        y = rng.uniform(0.01, 0.99)
        x1, x2 = rng.uniform(0.0, 1.0, size=2)
        lam = rng.uniform(0.0, 1.0)
        margin = (
            lam * bernoulli_kl(x1, y)
            + (1 - lam) * bernoulli_kl(x2, y)
            - bernoulli_kl(lam * x1 + (1 - lam) * x2, y)
        )
        worst = min(worst, margin)
        if margin < -slack:
            viol += 1
    for _ in range(draws):
        x = rng.uniform(0.0, 1.0)
        y1, y2 = rng.uniform(0.01, 0.99, size=2)
        lam = rng.uniform(0.0, 1.0)
        margin = (
            lam * bernoulli_kl(x, y1)
            + (1 - lam) * bernoulli_kl(x, y2)
            - bernoulli_kl(x, lam * y1 + (1 - lam) * y2)
        )
        worst = min(worst, margin)
        if margin < -slack:
            viol += 1
    record("kl-convexity-each-argument", viol, 2 * draws, worst)

    # Nested-interval monotonicity: a <= x <= y <= b implies d(a,b) >= d(x,y).
    viol = 0
    worst = math.inf
    for _ in range(draws):
        a, x, y, b = np.sort(rng.uniform(0.0, 1.0, size=4))
        outer = bernoulli_kl(float(a), float(b))
        inner = bernoulli_kl(float(x), float(y))
        if math.isinf(outer):
            continue  # inf dominates anything
        margin = outer - inner
        worst = min(worst, margin)
        if margin < -slack:
            viol += 1
    record("kl-nested-interval-monotonicity", viol, draws, worst)

    # Log bounds (a)/(b)/(c) on a grid spanning the domain plus random points.
    xs = np.concatenate(
        (
            np.arange(-0.99, 0.0, grid_step),
            np.arange(grid_step, 5.0 + grid_step, grid_step),
            rng.uniform(-0.999, 0.0, size=draws // 2),
            np.exp(rng.uniform(np.log(1e-6), np.log(1e6), size=draws // 2)),
        )
    )
    viol = 0
    worst = math.inf
    for x in xs:
        x = float(x)
        if not log_inequalities_check(x, slack):
            viol += 1
        lhs = math.log1p(x)
        margins = [lhs - x / (1.0 + x)]
        if x > 0.0:
            margins.append(lhs - 2.0 * x / (2.0 + x))
        else:
            margins.append(lhs - (x / (1.0 + x)) * ((2.0 + x) / 2.0))
        worst = min(worst, *margins)
    record("log-bounds-three-branches", viol, xs.size, worst)

    # Log-sum inequality: sum a_i log(a_i/b_i) >= A log(A/B).
    viol = 0
    worst = math.inf
    for _ in range(draws):
        k = int(rng.integers(2, 8))
        a = rng.uniform(0.0, 2.0, size=k)
        b = rng.uniform(1e-6, 2.0, size=k)
        a[rng.random(k) < 0.1] = 0.0  # exercise the 0*log(0) = 0 convention
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(a > 0.0, a * np.log(a / b), 0.0)
        lhs = float(terms.sum())
        asum, bsum = float(a.sum()), float(b.sum())
        rhs = asum * math.log(asum / bsum) if asum > 0.0 else 0.0
        margin = lhs - rhs
        worst = min(worst, margin)
        if margin < -slack:
            viol += 1
    record("log-sum-inequality", viol, draws, worst)

    # Pooling bound: sum over x_i < b of d(x_i, b) >= n * d(mean, b).
    # Exhaustive pair grid for n=2, random vectors for larger n.
    viol = 0
    worst = math.inf
    total = 0
    for x1 in grid:
        for x2 in grid:
            b = max(x1, x2) + (1.0 - max(x1, x2)) * 0.5
            pair = kl_sum_lower_bound([float(x1), float(x2)], float(b))
            margin = pair.lhs - pair.rhs
            worst = min(worst, margin)
            total += 1
            if margin < -slack:
                viol += 1
    for _ in range(draws):
        k = int(rng.integers(2, 21))
        xs_vec = rng.uniform(0.0, 1.0, size=k)
        m = float(xs_vec.mean())
        b = m + (1.0 - m) * rng.uniform(0.05, 0.95)
        if b >= 1.0 or b <= m:
            continue
        pair = kl_sum_lower_bound(xs_vec, b)
        total += 1
        if math.isinf(pair.lhs):
            continue
        margin = pair.lhs - pair.rhs
        worst = min(worst, margin)
        if margin < -slack:
            viol += 1
    record("kl-sum-pooling-bound", viol, total, worst)

    # Reverse-gap bound: d(b, a) >= (1 - 1/(1 + r/(2+r))) * b * log(b/a).
    viol = 0
    worst = math.inf
    total = 0
    for a in grid:
        for b in grid:
            if a >= b:
                continue
            pair = bar_kl_lower_bound(float(a), float(b))
            margin = pair.lhs - pair.rhs
            worst = min(worst, margin)
            total += 1
            if margin < -slack:
                viol += 1
    for _ in range(draws):
        a, b = np.sort(rng.uniform(1e-4, 1.0 - 1e-4, size=2))
        if a == b:
            continue
        pair = bar_kl_lower_bound(float(a), float(b))
        margin = pair.lhs - pair.rhs
        worst = min(worst, margin)
        total += 1
        if margin < -slack:
            viol += 1
    record("kl-reverse-gap-bound", viol, total, worst)

    # Identification divergence grows linearly in its argument gap on the
    # calibrated desk-scale domain.
    viol = 0
    worst = math.inf
    total = 0
    for n in (3, 4, 5, 8, 10, 100, 1000, 10_000):
        deltas = np.linspace(0.01, 1.0 - 2.0 / n, 200)
        for d in deltas:
            ratio = bai_kl_ratio(float(d), n)
            margin = ratio - BAI_RATIO_FLOOR
            worst = min(worst, margin)
            total += 1
            if margin < -1e-9:
                viol += 1
    for _ in range(draws):
        n = int(rng.integers(3, 10_001))
        d = rng.uniform(0.01, 1.0 - 2.0 / n)
        ratio = bai_kl_ratio(float(d), n)
        margin = ratio - BAI_RATIO_FLOOR
        worst = min(worst, margin)
        total += 1
        if margin < -1e-9:
            viol += 1
    record("identification-divergence-linear-floor", viol, total, worst)

    # Quadratic cap near 1/2: d(1/2, 1/2 + 2*eps) <= 12*eps^2 on eps in (0, 1/8].
    viol = 0
    worst = math.inf
    eps_grid = np.linspace(0.125 / 400, 0.125, 400)
    for e in eps_grid:
        margin = 12.0 * e * e - bernoulli_kl(0.5, 0.5 + 2.0 * float(e))
        worst = min(worst, margin)
        if margin < -slack:
            viol += 1
    record("kl-quadratic-cap-near-half", viol, eps_grid.size, worst)

    return results
