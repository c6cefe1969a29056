"""Exploration and retention algorithms: median elimination, PAC retention,
mirror-descent arm selection, and the two expected-gap retention strategies.

Stream discipline (what each call consumes from its RngStream, in order):

- median_elimination: one batched binomial draw per surviving arm per round,
  in the survivors' current list order.
- pac_bar: the subset draw (partial Fisher-Yates, one integer per selected
  slot), then the elimination run; on the zero-sample path, only the
  m-subset draw.
- find_best: 2*T uniforms for the mirror-descent run, then one uniform for
  the proportional selection; T=0 consumes a single integer draw instead.
- r_bar_sample: subset draw, then find_best.
- r_bar_regret: find_best(L1), subset draw, find_best(L2), then the drop draw
  when the two stages agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .env import BernoulliInstance, PullStats, RngStream
from .osmd import OsmdConfig, run_osmd

__all__ = [
    "PacParams",
    "EliminationOutcome",
    "FindBestOutcome",
    "RetentionResult",
    "me_round_budget",
    "median_elimination",
    "pac_bar",
    "select_proportional",
    "find_best",
    "rbar_sample_budget",
    "rbar_regret_budgets",
    "r_bar_sample",
    "r_bar_regret",
]


def _validate_labels(arms: Sequence[int], instance: BernoulliInstance) -> list[int]:
    labels = list(arms)
    if not labels:
        raise ValueError("arm set must be non-empty")
    seen = set()
    for a in labels:
        if not isinstance(a, (int, np.integer)) or isinstance(a, bool):
            raise ValueError(f"arm label must be an integer, got {a!r}")
        if not 1 <= a <= instance.n:
            raise ValueError(f"arm label {a} outside 1..{instance.n}")
        if a in seen:
            raise ValueError(f"duplicate arm label {a}")
        seen.add(a)
    return [int(a) for a in labels]


def _uniform_subset(rng: RngStream, items: Sequence[int], k: int) -> list[int]:
    """Uniformly random k-subset via partial Fisher-Yates; consumes k integers."""
    arr = list(items)
    n = len(arr)
    if not 0 <= k <= n:
        raise ValueError(f"subset size {k} outside 0..{n}")
    gen = rng.generator
    for i in range(k):
        j = int(gen.integers(i, n))
        arr[i], arr[j] = arr[j], arr[i]
    return arr[:k]


@dataclass(frozen=True)
class PacParams:
    """Parameters of the (eps, delta) retention guarantee with target size m."""

    eps: float
    delta: float
    m: int

    def __post_init__(self) -> None:
        if not 0.0 < float(self.eps) < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0.0 < float(self.delta) < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not isinstance(self.m, (int, np.integer)) or isinstance(self.m, bool) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "eps", float(self.eps))
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True)
class EliminationOutcome:
    """Result of a median-elimination run.

    schedule records the realized rounds as (survivor count, per-arm pulls);
    ties at the median can keep more than half alive, so the realized
    trajectory is authoritative, not the nominal halving.
    """

    arm: int
    pull_stats: PullStats
    schedule: tuple[tuple[int, int], ...]

    @property
    def samples_used(self) -> int:
        return self.pull_stats.rounds


@dataclass(frozen=True)
class FindBestOutcome:
    arm: int
    pull_stats: PullStats

    @property
    def samples_used(self) -> int:
        return self.pull_stats.rounds


@dataclass(frozen=True)
class RetentionResult:
    """A retained arm set plus full sampling accountancy for the run."""

    retained: frozenset[int]
    samples_used: int
    pull_stats: PullStats
    chosen_arm: int | None = None
    schedule: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.samples_used != self.pull_stats.rounds:
            raise ValueError(
                f"samples_used ({self.samples_used}) != recorded rounds "
                f"({self.pull_stats.rounds})"
            )


def me_round_budget(eps_l: float, delta_l: float) -> int:
    """Per-arm pulls for one elimination round: ceil(4/eps_l^2 * ln(3/delta_l))."""
    eps_l = float(eps_l)
    delta_l = float(delta_l)
    if not eps_l > 0.0:
        raise ValueError(f"eps_l must be positive, got {eps_l}")
    if not 0.0 < delta_l < 3.0:
        raise ValueError(f"delta_l must lie in (0, 3), got {delta_l}")
    return math.ceil(4.0 / eps_l**2 * math.log(3.0 / delta_l))


def median_elimination(
    arms: Sequence[int],
    eps: float,
    delta: float,
    instance: BernoulliInstance,
    rng: RngStream,
) -> EliminationOutcome:
    """Iterated halving: pull every survivor ceil(4/eps_l^2 * ln(3/delta_l))
    times, keep the arms whose empirical mean reaches the median (the
    ceil(s/2)-th largest of s values; ties survive), then tighten
    eps_l by 3/4 and halve delta_l. Returns an eps-optimal arm of the input
    set with probability at least 1 - delta.

    Each (arm, round) batch is drawn as a single binomial success count,
    which is distributionally identical to per-pull Bernoulli draws because
    only the count is used.
    """
    labels = _validate_labels(arms, instance)
    eps = float(eps)
    delta = float(delta)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    pulls = np.zeros(instance.n, dtype=np.int64)
    cum = 0.0
    schedule: list[tuple[int, int]] = []
    survivors = labels
    eps_l = eps / 4.0
    delta_l = delta / 2.0
    gen = rng.generator
    while len(survivors) > 1:
        s = len(survivors)
        k = me_round_budget(eps_l, delta_l)
        idx = np.asarray(survivors, dtype=np.int64) - 1
        sums = gen.binomial(k, instance.means[idx])
        phat = sums / k
        pulls[idx] += k
        cum += float(sums.sum())
        med = np.sort(phat)[s - math.ceil(s / 2)]
        schedule.append((s, k))
        survivors = [a for a, p in zip(survivors, phat) if p >= med]
        eps_l *= 0.75
        delta_l *= 0.5
    stats = PullStats(pulls=pulls, cumulative_reward=cum, rounds=int(pulls.sum()))
    return EliminationOutcome(arm=survivors[0], pull_stats=stats, schedule=tuple(schedule))


def pac_bar(
    arms: Sequence[int],
    params: PacParams,
    instance: BernoulliInstance,
    rng: RngStream,
) -> RetentionResult:
    """Retain m of the given arms so that an eps-optimal arm is kept with
    probability at least 1 - delta.

    Draws a uniform (n-m+1)-subset, runs median elimination on it with
    failure budget n*delta/(n-m+1), and keeps the winner plus everything
    outside the subset. When that budget reaches 1 the elimination guarantee
    is vacuous, so the run keeps m uniformly random arms with zero samples.
    """
    labels = _validate_labels(arms, instance)
    n = len(labels)
    if params.m > n:
        raise ValueError(f"m={params.m} exceeds arm count {n}")
    delta_me = n * params.delta / (n - params.m + 1)
    if delta_me >= 1.0:
        retained = frozenset(_uniform_subset(rng, labels, params.m))
        return RetentionResult(
            retained=retained,
            samples_used=0,
            pull_stats=PullStats.zero(instance.n),
        )
    subset = _uniform_subset(rng, labels, n - params.m + 1)
    outcome = median_elimination(subset, params.eps, delta_me, instance, rng)
    retained = (set(labels) - set(subset)) | {outcome.arm}
    if len(retained) != params.m:
        raise RuntimeError(
            f"retained {len(retained)} arms, expected {params.m}"
        )
    return RetentionResult(
        retained=frozenset(retained),
        samples_used=outcome.samples_used,
        pull_stats=outcome.pull_stats,
        chosen_arm=outcome.arm,
        schedule=outcome.schedule,
    )


def select_proportional(
    arms: Sequence[int],
    pulls: Sequence[int],
    rounds: int,
    rng: RngStream,
) -> int:
    """Pick arms[i] with probability pulls[i]/rounds; consumes one uniform.

    The comparison u * rounds < cumulative count is exact in integers, so the
    selection probabilities are exactly T_i/rounds.
    """
    labels = list(arms)
    counts = [int(c) for c in pulls]
    if len(labels) != len(counts) or not labels:
        raise ValueError("arms and pulls must be equal-length and non-empty")
    if any(c < 0 for c in counts):
        raise ValueError("pull counts must be non-negative")
    rounds = int(rounds)
    if rounds <= 0 or sum(counts) != rounds:
        raise ValueError(f"pull counts must sum to rounds ({rounds})")
    threshold = rng.generator.random() * rounds
    acc = 0
    for label, c in zip(labels, counts):
        acc += c
        if threshold < acc:
            return label
    return labels[-1]


def find_best(
    arms: Sequence[int],
    rounds: int,
    instance: BernoulliInstance,
    config: OsmdConfig | None = None,
    rng: RngStream | None = None,
) -> FindBestOutcome:
    """Mirror descent for `rounds` rounds, then one arm chosen with
    probability proportional to its pull count. Expected mean gap to the best
    of `arms` is at most sqrt(2*|arms|/rounds). rounds=0 degenerates to a
    uniformly random arm with zero samples.
    """
    labels = _validate_labels(arms, instance)
    if not isinstance(rounds, (int, np.integer)) or isinstance(rounds, bool) or rounds < 0:
        raise ValueError(f"rounds must be a non-negative integer, got {rounds!r}")
    rounds = int(rounds)
    if rng is None:
        raise ValueError("find_best needs an RngStream")
    if rounds == 0:
        arm = labels[int(rng.generator.integers(0, len(labels)))]
        return FindBestOutcome(arm=arm, pull_stats=PullStats.zero(instance.n))
    stats = run_osmd(labels, rounds, instance, config, rng)
    counts = [int(stats.pulls[a - 1]) for a in labels]
    arm = select_proportional(labels, counts, rounds, rng)
    return FindBestOutcome(arm=arm, pull_stats=stats)


def rbar_sample_budget(n: int, m: int, r: float) -> int:
    """ceil(2*(n-m+2)^3 / (n*r)^2): rounds for the pure-sampling strategy."""
    _validate_budget_args(n, m, r)
    return math.ceil(2.0 * (n - m + 2) ** 3 / (n * float(r)) ** 2)


def rbar_regret_budgets(n: int, m: int, r: float) -> tuple[int, int]:
    """(L1, L2) for the low-regret strategy: L2 = 2*(n-m+2)^3/((n-1)^2 r^2)
    and L1 = (m-2)/(n-1) * L2, each ceiled after the exact float products."""
    _validate_budget_args(n, m, r)
    if n < 2 or m < 2:
        raise ValueError("two-stage budgets need n >= 2 and m >= 2")
    l2 = 2.0 * (n - m + 2) ** 3 / ((n - 1) ** 2 * float(r) ** 2)
    l1 = (m - 2) / (n - 1) * l2
    return math.ceil(l1), math.ceil(l2)


def _validate_budget_args(n: int, m: int, r: float) -> None:
    for name, v in (("n", n), ("m", m)):
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")
    if m > n:
        raise ValueError(f"m={m} exceeds n={n}")
    if not float(r) > 0.0:
        raise ValueError(f"r must be positive, got {r}")


def r_bar_sample(
    arms: Sequence[int],
    m: int,
    r: float,
    instance: BernoulliInstance,
    rng: RngStream,
    config: OsmdConfig | None = None,
) -> RetentionResult:
    """Retain m arms with expected gap below r using one mirror-descent stage
    on a random (n-m+1)-subset of ceil(2*(n-m+2)^3/(n*r)^2) rounds."""
    labels = _validate_labels(arms, instance)
    n = len(labels)
    budget = rbar_sample_budget(n, m, r)
    subset = _uniform_subset(rng, labels, n - int(m) + 1)
    outcome = find_best(subset, budget, instance, config, rng)
    retained = (set(labels) - set(subset)) | {outcome.arm}
    if len(retained) != m:
        raise RuntimeError(f"retained {len(retained)} arms, expected {m}")
    return RetentionResult(
        retained=frozenset(retained),
        samples_used=budget,
        pull_stats=outcome.pull_stats,
        chosen_arm=outcome.arm,
    )


def r_bar_regret(
    arms: Sequence[int],
    m: int,
    r: float,
    instance: BernoulliInstance,
    rng: RngStream,
    config: OsmdConfig | None = None,
) -> RetentionResult:
    """Retain m arms with expected gap below r while keeping the exploration
    regret low.

    m=1 runs a single mirror-descent selection over all arms for
    ceil(2n/r^2) rounds. Otherwise stage one picks a provisional best from
    all n arms (L1 rounds), stage two re-selects among that arm plus a random
    (n-m+1)-subset of the rest (L2 rounds), and the subset loses either its
    non-winners (stages disagree) or a random n-m of its members (stages
    agree). Requires 2 <= m <= n-1 on the two-stage path.
    """
    labels = _validate_labels(arms, instance)
    n = len(labels)
    m = int(m)
    if not float(r) > 0.0:
        raise ValueError(f"r must be positive, got {r}")
    if m == 1:
        budget = math.ceil(2.0 * n / float(r) ** 2)
        outcome = find_best(labels, budget, instance, config, rng)
        return RetentionResult(
            retained=frozenset({outcome.arm}),
            samples_used=budget,
            pull_stats=outcome.pull_stats,
            chosen_arm=outcome.arm,
        )
    if not 2 <= m <= n - 1:
        raise ValueError(f"two-stage path needs 2 <= m <= n-1, got m={m}, n={n}")
    l1, l2 = rbar_regret_budgets(n, m, r)
    first = find_best(labels, l1, instance, config, rng)
    rest = [a for a in labels if a != first.arm]
    subset = _uniform_subset(rng, rest, n - m + 1)
    second = find_best(subset + [first.arm], l2, instance, config, rng)
    if second.arm == first.arm:
        drop = set(_uniform_subset(rng, [a for a in subset if a != second.arm], n - m))
    else:
        drop = {a for a in subset if a != second.arm}
    retained = set(labels) - drop
    if len(retained) != m:
        raise RuntimeError(f"retained {len(retained)} arms, expected {m}")
    if second.arm not in retained:
        raise RuntimeError("stage-two winner missing from retained set")
    return RetentionResult(
        retained=frozenset(retained),
        samples_used=l1 + l2,
        pull_stats=first.pull_stats + second.pull_stats,
        chosen_arm=second.arm,
    )
