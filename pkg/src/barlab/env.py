"""Bernoulli bandit instances, seeded reward streams, and pull accounting.

Arms are labeled 1..n in the public API. Internally means live in a numpy
array indexed 0..n-1; the translation happens at the API boundary and nowhere
else.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BernoulliInstance",
    "RngStream",
    "PullStats",
    "hard_instance",
    "instance_from_spec",
    "sample",
    "sample_batch",
    "expected_gap",
]

# H_j families use mean shifts of eps and 2*eps around 1/2; the constructions
# they support assume eps <= 1/8.
HARD_INSTANCE_EPS_WARN = 0.125


@dataclass(frozen=True)
class BernoulliInstance:
    """A Bernoulli bandit: one mean per arm, arms labeled 1..n."""

    means: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.means, dtype=np.float64).copy()
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("means must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("means must be finite")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("means must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "means", arr)

    @property
    def n(self) -> int:
        return int(self.means.size)

    @property
    def best_arm(self) -> int:
        """Label of a maximal-mean arm (lowest label on ties)."""
        return int(np.argmax(self.means)) + 1

    @property
    def best_mean(self) -> float:
        return float(self.means.max())

    @property
    def gaps(self) -> np.ndarray:
        """Suboptimality gaps Delta_i = max_j mu_j - mu_i, indexed 0..n-1."""
        return self.means.max() - self.means

    def mean_of(self, arm: int) -> float:
        _check_arm(self, arm)
        return float(self.means[arm - 1])


def _check_arm(instance: BernoulliInstance, arm: int) -> None:
    if not isinstance(arm, (int, np.integer)) or isinstance(arm, bool):
        raise ValueError(f"arm label must be an integer, got {arm!r}")
    if not 1 <= arm <= instance.n:
        raise ValueError(f"arm label {arm} outside 1..{instance.n}")


_MASK64 = (1 << 64) - 1


@dataclass
class RngStream:
    """Counter-based random stream: (seed, stream_id) fully determine the draws.

    Distinct stream ids on the same seed give statistically independent
    streams (Philox keyed on stream_id * 2^64 + seed), which is what the
    harness relies on for reproducibility under parallel trial execution.
    """

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        for name, value in (("seed", self.seed), ("stream_id", self.stream_id)):
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise ValueError(f"{name} must be an integer, got {value!r}")
            if not 0 <= int(value) <= _MASK64:
                raise ValueError(f"{name} must fit in 64 bits, got {value}")
        self.seed = int(self.seed)
        self.stream_id = int(self.stream_id)

    @property
    def generator(self) -> np.random.Generator:
        """The underlying generator; state advances across calls."""
        if self._gen is None:
            key = (self.stream_id << 64) | self.seed
            self._gen = np.random.Generator(np.random.Philox(key=key))
        return self._gen

    def spawn(self, stream_id: int) -> "RngStream":
        """A fresh stream on the same seed."""
        return RngStream(self.seed, stream_id)


@dataclass
class PullStats:
    """Per-arm pull counts plus cumulative reward for one algorithm run."""

    pulls: np.ndarray
    cumulative_reward: float = 0.0
    rounds: int = 0

    def __post_init__(self) -> None:
        arr = np.asarray(self.pulls, dtype=np.int64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("pulls must be a non-empty 1-d sequence")
        if np.any(arr < 0):
            raise ValueError("pulls must be non-negative")
        self.pulls = arr
        self.cumulative_reward = float(self.cumulative_reward)
        self.rounds = int(self.rounds)
        if self.pulls.sum() != self.rounds:
            raise ValueError(
                f"rounds ({self.rounds}) != total pulls ({int(self.pulls.sum())})"
            )

    @classmethod
    def zero(cls, n: int) -> "PullStats":
        return cls(pulls=np.zeros(int(n), dtype=np.int64))

    def __add__(self, other: "PullStats") -> "PullStats":
        if self.pulls.size != other.pulls.size:
            raise ValueError("cannot combine stats over different arm counts")
        return PullStats(
            pulls=self.pulls + other.pulls,
            cumulative_reward=self.cumulative_reward + other.cumulative_reward,
            rounds=self.rounds + other.rounds,
        )

    def realized_regret(self, instance: BernoulliInstance) -> float:
        """sum_i Delta_i * T_i against the instance's best mean."""
        if self.pulls.size != instance.n:
            raise ValueError("stats do not match instance arm count")
        return float(instance.gaps @ self.pulls)


def hard_instance(n: int, eps: float, j: int | None = None) -> BernoulliInstance:
    """The H_j family: H_1 = (1/2 + eps, 1/2, ..., 1/2); H_j for j >= 2 also
    raises coordinate j to 1/2 + 2*eps.

    j=None means H_1. j=1 is rejected (H_1 is the base instance, not a
    perturbation of itself).
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    eps = float(eps)
    if eps < 0.0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    if eps > HARD_INSTANCE_EPS_WARN:
        warnings.warn(
            f"hard_instance with eps={eps} > {HARD_INSTANCE_EPS_WARN}; the H_j "
            "constructions assume eps <= 1/8",
            stacklevel=2,
        )
    means = np.full(int(n), 0.5)
    means[0] = 0.5 + eps
    if j is not None:
        if not isinstance(j, (int, np.integer)) or isinstance(j, bool):
            raise ValueError(f"j must be an integer, got {j!r}")
        if j == 1:
            raise ValueError("j=1 is the unperturbed instance; use j=None")
        if not 2 <= j <= n:
            raise ValueError(f"j={j} outside 2..{n}")
        means[j - 1] = 0.5 + 2.0 * eps
    if np.any(means > 1.0):
        raise ValueError(f"eps={eps} pushes a mean above 1")
    return BernoulliInstance(means=means)


def instance_from_spec(obj: object) -> BernoulliInstance:
    """Parse an instance spec: an explicit mean list, or a family dict like
    {"family": "H", "n": 10, "eps": 0.1, "j": 3} (j optional)."""
    if isinstance(obj, (list, tuple)):
        return BernoulliInstance(means=np.asarray(obj, dtype=np.float64))
    if isinstance(obj, dict):
        if obj.get("family") != "H":
            raise ValueError(f"unknown instance family: {obj.get('family')!r}")
        allowed = {"family", "n", "eps", "j"}
        extra = set(obj) - allowed
        if extra:
            raise ValueError(f"unknown instance keys: {sorted(extra)}")
        if "n" not in obj or "eps" not in obj:
            raise ValueError("family 'H' requires 'n' and 'eps'")
        return hard_instance(obj["n"], obj["eps"], obj.get("j"))
    raise ValueError(f"instance spec must be a mean list or a family dict, got {type(obj).__name__}")


def sample(instance: BernoulliInstance, arm: int, rng: RngStream) -> int:
    """One Bernoulli reward from the given arm. Consumes one uniform."""
    _check_arm(instance, arm)
    u = rng.generator.random()
    return int(u < instance.means[arm - 1])


def sample_batch(instance: BernoulliInstance, arm: int, k: int, rng: RngStream) -> int:
    """Sum of k Bernoulli rewards from one arm, drawn as a single binomial.

    Distributionally identical to k calls to sample() when only the success
    count is consumed downstream; one draw instead of k keeps large fixed
    budgets (millions of pulls) cheap.
    """
    _check_arm(instance, arm)
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    if k == 0:
        return 0
    return int(rng.generator.binomial(int(k), instance.means[arm - 1]))


def expected_gap(instance: BernoulliInstance, retained: Iterable[int]) -> float:
    """max_i mu_i - max_{i in retained} mu_i: the retention quality of a set."""
    labels = list(retained)
    if not labels:
        raise ValueError("retained set must be non-empty")
    seen = set()
    for arm in labels:
        _check_arm(instance, arm)
        if arm in seen:
            raise ValueError(f"duplicate arm label {arm} in retained set")
        seen.add(arm)
    idx = np.asarray(sorted(seen), dtype=np.int64) - 1
    return float(instance.best_mean - instance.means[idx].max())
