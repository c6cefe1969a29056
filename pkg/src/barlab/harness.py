"""Seeded Monte Carlo experiment runner with CSV emission, statistical
summaries, and the likelihood-ratio audit.

Determinism contract: trial t always runs on RngStream(seed, t), and results
are folded in trial-id order, so any parallelism level produces the same
records byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .env import (
    BernoulliInstance,
    RngStream,
    expected_gap,
    instance_from_spec,
)
from .explore import (
    PacParams,
    find_best,
    median_elimination,
    pac_bar,
    r_bar_regret,
    r_bar_sample,
)
from .kl import bernoulli_kl
from .osmd import OsmdConfig, run_osmd

__all__ = [
    "ConfigError",
    "ALGORITHM_NAMES",
    "CSV_COLUMNS",
    "Z_95",
    "ExperimentConfig",
    "TrialRecord",
    "ExperimentSummary",
    "ExperimentRun",
    "load_config",
    "config_from_dict",
    "run_trial",
    "run_experiment",
    "write_records",
    "records_to_csv",
    "read_records",
    "wilson_interval",
    "Transcript",
    "RoundRobinPolicy",
    "event_mean_exceeds",
    "event_constant",
    "AuditResult",
    "likelihood_ratio_audit",
    "load_audit_config",
]


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


# Two-sided 95% normal quantile, used by the Wilson score interval.
Z_95 = 1.959963984540054

ALGORITHM_NAMES = (
    "osmd",
    "find-best",
    "median-elimination",
    "pac-bar",
    "rbar-sample",
    "rbar-regret",
)

# Per-algorithm required parameters and whether mirror-descent tuning keys
# (eta, estimator_variant, projection_tol) apply.
_ALGO_PARAMS: dict[str, tuple[frozenset[str], bool]] = {
    "osmd": (frozenset({"rounds"}), True),
    "find-best": (frozenset({"rounds"}), True),
    "median-elimination": (frozenset({"eps", "delta"}), False),
    "pac-bar": (frozenset({"eps", "delta", "m"}), False),
    "rbar-sample": (frozenset({"m", "r"}), True),
    "rbar-regret": (frozenset({"m", "r"}), True),
}

_PARAM_FIELDS = ("eps", "delta", "m", "r", "rounds")
_OSMD_FIELDS = ("eta", "estimator_variant", "projection_tol")


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str
    instance: BernoulliInstance
    trials: int
    seed: int
    parallelism: int = 1
    eps: float | None = None
    delta: float | None = None
    m: int | None = None
    r: float | None = None
    rounds: int | None = None
    eta: float | None = None
    estimator_variant: str = "centered-importance-weighted"
    projection_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.algorithm not in _ALGO_PARAMS:
            raise ConfigError(
                f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHM_NAMES}"
            )
        if not isinstance(self.trials, int) or isinstance(self.trials, bool) or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if (
            not isinstance(self.parallelism, int)
            or isinstance(self.parallelism, bool)
            or self.parallelism < 1
        ):
            raise ConfigError(f"parallelism must be a positive integer, got {self.parallelism!r}")
        required, uses_osmd = _ALGO_PARAMS[self.algorithm]
        for name in _PARAM_FIELDS:
            value = getattr(self, name)
            if name in required and value is None:
                raise ConfigError(f"algorithm {self.algorithm!r} requires parameter {name!r}")
            if name not in required and value is not None:
                raise ConfigError(
                    f"parameter {name!r} does not apply to algorithm {self.algorithm!r}"
                )
        if not uses_osmd and (
            self.eta is not None
            or self.estimator_variant != "centered-importance-weighted"
            or self.projection_tol != 1e-10
        ):
            raise ConfigError(
                f"mirror-descent tuning keys do not apply to {self.algorithm!r}"
            )
        try:
            self.osmd_config()  # validates eta / variant / tolerance
            n = self.instance.n
            if self.eps is not None and not 0.0 < self.eps < 1.0:
                raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
            if self.delta is not None and not 0.0 < self.delta < 1.0:
                raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
            if self.m is not None:
                if not isinstance(self.m, int) or isinstance(self.m, bool) or not 1 <= self.m <= n:
                    raise ValueError(f"m must be an integer in 1..{n}, got {self.m!r}")
                if self.algorithm == "rbar-regret" and self.m != 1 and not self.m <= n - 1:
                    raise ValueError(f"rbar-regret needs m <= n-1 or m = 1, got m={self.m}, n={n}")
            if self.r is not None and not float(self.r) > 0.0:
                raise ValueError(f"r must be positive, got {self.r}")
            if self.rounds is not None and (
                not isinstance(self.rounds, int)
                or isinstance(self.rounds, bool)
                or self.rounds < 0
            ):
                raise ValueError(f"rounds must be a non-negative integer, got {self.rounds!r}")
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def osmd_config(self) -> OsmdConfig:
        return OsmdConfig(
            eta=self.eta,
            estimator_variant=self.estimator_variant,
            projection_tol=self.projection_tol,
        )


_TOP_LEVEL_KEYS = frozenset(
    {"algorithm", "instance", "trials", "seed", "parallelism"}
    | set(_PARAM_FIELDS)
    | set(_OSMD_FIELDS)
)


def config_from_dict(obj: object) -> ExperimentConfig:
    if not isinstance(obj, dict):
        raise ConfigError(f"config must be a JSON object, got {type(obj).__name__}")
    unknown = set(obj) - _TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("algorithm", "instance", "trials", "seed"):
        if key not in obj:
            raise ConfigError(f"config missing required key {key!r}")
    try:
        instance = instance_from_spec(obj["instance"])
    except ValueError as exc:
        raise ConfigError(f"bad instance spec: {exc}") from None
    kwargs = {k: v for k, v in obj.items() if k != "instance"}
    return ExperimentConfig(instance=instance, **kwargs)


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    return config_from_dict(obj)


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    algorithm: str
    n: int
    m: int | None
    eps_or_r: float | None
    delta: float | None
    samples_used: int
    realized_regret: float
    realized_gap: float | None
    contains_eps_optimal: bool | None


def run_trial(config: ExperimentConfig, trial_id: int) -> TrialRecord:
    """Run one trial on RngStream(config.seed, trial_id)."""
    rng = RngStream(config.seed, trial_id)
    inst = config.instance
    arms = list(range(1, inst.n + 1))
    algo = config.algorithm
    eps_or_r: float | None = None
    delta: float | None = None
    m: int | None = None
    gap: float | None = None
    contains: bool | None = None

    if algo == "osmd":
        stats = run_osmd(arms, config.rounds, inst, config.osmd_config(), rng)
        samples = stats.rounds
    elif algo == "find-best":
        out = find_best(arms, config.rounds, inst, config.osmd_config(), rng)
        stats = out.pull_stats
        samples = stats.rounds
        m = 1
        gap = expected_gap(inst, [out.arm])
    elif algo == "median-elimination":
        out = median_elimination(arms, config.eps, config.delta, inst, rng)
        stats = out.pull_stats
        samples = out.samples_used
        m = 1
        eps_or_r = config.eps
        delta = config.delta
        gap = expected_gap(inst, [out.arm])
        contains = gap < config.eps
    elif algo == "pac-bar":
        res = pac_bar(arms, PacParams(config.eps, config.delta, config.m), inst, rng)
        stats = res.pull_stats
        samples = res.samples_used
        m = len(res.retained)
        eps_or_r = config.eps
        delta = config.delta
        gap = expected_gap(inst, res.retained)
        contains = gap < config.eps
    elif algo == "rbar-sample":
        res = r_bar_sample(arms, config.m, config.r, inst, rng, config.osmd_config())
        stats = res.pull_stats
        samples = res.samples_used
        m = len(res.retained)
        eps_or_r = config.r
        gap = expected_gap(inst, res.retained)
    elif algo == "rbar-regret":
        res = r_bar_regret(arms, config.m, config.r, inst, rng, config.osmd_config())
        stats = res.pull_stats
        samples = res.samples_used
        m = len(res.retained)
        eps_or_r = config.r
        gap = expected_gap(inst, res.retained)
    else:  # unreachable: config validation rejects unknown names
        raise ConfigError(f"unknown algorithm {algo!r}")

    return TrialRecord(
        trial_id=trial_id,
        algorithm=algo,
        n=inst.n,
        m=m,
        eps_or_r=eps_or_r,
        delta=delta,
        samples_used=samples,
        realized_regret=stats.realized_regret(inst),
        realized_gap=gap,
        contains_eps_optimal=contains,
    )


@dataclass(frozen=True)
class ExperimentSummary:
    trials: int
    mean_samples: float
    se_samples: float
    mean_regret: float
    se_regret: float
    mean_gap: float | None
    se_gap: float | None
    failures: int | None
    failure_rate: float | None
    failure_wilson: tuple[float, float] | None

    def format_lines(self) -> list[str]:
        lines = [
            f"trials:          {self.trials}",
            f"mean samples:    {self.mean_samples:.6g} (se {self.se_samples:.3g})",
            f"mean regret:     {self.mean_regret:.6g} (se {self.se_regret:.3g})",
        ]
        if self.mean_gap is not None:
            lines.append(f"mean gap:        {self.mean_gap:.6g} (se {self.se_gap:.3g})")
        if self.failures is not None:
            lo, hi = self.failure_wilson
            lines.append(
                f"failure rate:    {self.failure_rate:.6g} "
                f"({self.failures}/{self.trials}, Wilson 95% [{lo:.6g}, {hi:.6g}])"
            )
        return lines


def _mean_se(values: Sequence[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return mean, se


def summarize(records: Sequence[TrialRecord]) -> ExperimentSummary:
    if not records:
        raise ValueError("cannot summarize zero records")
    mean_samples, se_samples = _mean_se([r.samples_used for r in records])
    mean_regret, se_regret = _mean_se([r.realized_regret for r in records])
    gaps = [r.realized_gap for r in records if r.realized_gap is not None]
    mean_gap, se_gap = _mean_se(gaps) if gaps else (None, None)
    flags = [r.contains_eps_optimal for r in records if r.contains_eps_optimal is not None]
    if flags:
        failures = sum(1 for f in flags if not f)
        failure_rate = failures / len(flags)
        failure_wilson = wilson_interval(failures, len(flags))
    else:
        failures = failure_rate = failure_wilson = None
    return ExperimentSummary(
        trials=len(records),
        mean_samples=mean_samples,
        se_samples=se_samples,
        mean_regret=mean_regret,
        se_regret=se_regret,
        mean_gap=mean_gap,
        se_gap=se_gap,
        failures=failures,
        failure_rate=failure_rate,
        failure_wilson=failure_wilson,
    )


def theory_scale(config: ExperimentConfig) -> tuple[str, float] | None:
    """The constant-free theoretical scale for eyeballing next to observed
    counts. Reported only; never asserted (the hidden constants are unnamed)."""
    n = config.instance.n
    if config.algorithm == "pac-bar":
        n_m = n - config.m
        if n_m <= 0:
            return None
        arg = n_m / (n * config.delta)
        return ("(n-m)/eps^2 * log((n-m)/(n*delta))", n_m / config.eps**2 * math.log(arg))
    if config.algorithm == "median-elimination":
        return ("n/eps^2 * log(1/delta)", n / config.eps**2 * math.log(1.0 / config.delta))
    if config.algorithm == "rbar-sample":
        return ("(n-m)^3/(n*r)^2", (n - config.m) ** 3 / (n * config.r) ** 2)
    if config.algorithm == "rbar-regret":
        n_m = n - config.m
        if n_m <= 0:
            return None
        scale = n_m**2 / (n * config.r) * (1.0 + math.sqrt(config.m / n_m))
        return ("(n-m)^2/(n*r) * (1+sqrt(m/(n-m)))", scale)
    if config.algorithm in ("osmd", "find-best") and config.rounds:
        return ("sqrt(2*n*T) regret scale", math.sqrt(2.0 * n * config.rounds))
    return None


@dataclass(frozen=True)
class ExperimentRun:
    config: ExperimentConfig
    records: tuple[TrialRecord, ...]
    summary: ExperimentSummary
    csv_text: str


def run_experiment(config: ExperimentConfig, out_path: str | None = None) -> ExperimentRun:
    """Run all trials, fold records in trial-id order, optionally write CSV.

    The record list depends only on (config fields, seed), not on parallelism
    or completion order.
    """
    if config.parallelism == 1:
        records = [run_trial(config, t) for t in range(config.trials)]
    else:
        records = [None] * config.trials  # type: ignore[list-item]
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            futures = {pool.submit(run_trial, config, t): t for t in range(config.trials)}
            for fut in as_completed(futures):
                records[futures[fut]] = fut.result()
    records = list(records)
    text = records_to_csv(records)
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return ExperimentRun(
        config=config,
        records=tuple(records),
        summary=summarize(records),
        csv_text=text,
    )


CSV_COLUMNS = (
    "trial_id",
    "algorithm",
    "n",
    "m",
    "eps_or_r",
    "delta",
    "samples_used",
    "realized_regret",
    "realized_gap",
    "contains_eps_optimal",
)


def _format_field(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def records_to_csv(records: Sequence[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [
                _format_field(getattr(r, col))
                for col in CSV_COLUMNS
            ]
        )
    return buf.getvalue()


def write_records(path: str, records: Sequence[TrialRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(records))


def _parse_optional(text: str, kind: Callable[[str], object]) -> object | None:
    return None if text == "" else kind(text)


def _parse_bool(text: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise ValueError(f"expected 'true' or 'false', got {text!r}")


def read_records(path: str) -> list[TrialRecord]:
    """Parse an emitted CSV back into records; the round trip is exact."""
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_records(fh.read())


def parse_records(text: str) -> list[TrialRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ValueError(f"CSV header {header} does not match {CSV_COLUMNS}")
    out = []
    for row in reader:
        if len(row) != len(CSV_COLUMNS):
            raise ValueError(f"row has {len(row)} fields, expected {len(CSV_COLUMNS)}: {row}")
        out.append(
            TrialRecord(
                trial_id=int(row[0]),
                algorithm=row[1],
                n=int(row[2]),
                m=_parse_optional(row[3], int),
                eps_or_r=_parse_optional(row[4], float),
                delta=_parse_optional(row[5], float),
                samples_used=int(row[6]),
                realized_regret=float(row[7]),
                realized_gap=_parse_optional(row[8], float),
                contains_eps_optimal=_parse_optional(row[9], _parse_bool),
            )
        )
    return out


def wilson_interval(successes: int, trials: int, z: float = Z_95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if not isinstance(trials, (int, np.integer)) or isinstance(trials, bool) or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    if not isinstance(successes, (int, np.integer)) or isinstance(successes, bool):
        raise ValueError(f"successes must be an integer, got {successes!r}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes {successes} outside 0..{trials}")
    if not float(z) > 0.0:
        raise ValueError(f"z must be positive, got {z}")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


# --- Likelihood-ratio audit -------------------------------------------------


@dataclass(frozen=True)
class Transcript:
    """One run's full pull/reward history under a fixed-budget policy."""

    arms: np.ndarray  # 1-based labels, one per pull
    rewards: np.ndarray  # 0/1, aligned with arms
    n: int

    def pull_counts(self) -> np.ndarray:
        return np.bincount(self.arms - 1, minlength=self.n)

    def mean_of(self, arm: int) -> float:
        mask = self.arms == arm
        total = int(mask.sum())
        if total == 0:
            raise ValueError(f"arm {arm} was never pulled")
        return float(self.rewards[mask].sum() / total)


@dataclass(frozen=True)
class RoundRobinPolicy:
    """Pull arms 1..n cyclically, pulls_per_arm full cycles."""

    pulls_per_arm: int

    def __post_init__(self) -> None:
        if (
            not isinstance(self.pulls_per_arm, (int, np.integer))
            or isinstance(self.pulls_per_arm, bool)
            or self.pulls_per_arm < 1
        ):
            raise ValueError(f"pulls_per_arm must be a positive integer, got {self.pulls_per_arm!r}")

    def run(self, instance: BernoulliInstance, rng: RngStream) -> Transcript:
        n = instance.n
        arms = np.tile(np.arange(1, n + 1, dtype=np.int64), self.pulls_per_arm)
        u = rng.generator.random(arms.size)
        rewards = (u < instance.means[arms - 1]).astype(np.int64)
        return Transcript(arms=arms, rewards=rewards, n=n)


def event_mean_exceeds(arm: int, than: int) -> Callable[[Transcript], bool]:
    """Event: empirical mean of `arm` strictly exceeds that of `than`."""

    def predicate(t: Transcript) -> bool:
        return t.mean_of(arm) > t.mean_of(than)

    predicate.__name__ = f"mean_of_{arm}_exceeds_{than}"
    return predicate


def event_constant(value: bool) -> Callable[[Transcript], bool]:
    def predicate(t: Transcript) -> bool:
        return value

    predicate.__name__ = f"always_{value}".lower()
    return predicate


@dataclass(frozen=True)
class AuditResult:
    lhs: float
    lhs_se: float
    rhs: float
    rhs_se: float
    p_event: float
    p_event_alt: float
    boundary: bool
    passed: bool
    trials: int

    def format_lines(self) -> list[str]:
        status = "PASS" if self.passed else "FAIL"
        return [
            f"lhs (divergence paid):    {self.lhs:.6g} (se {self.lhs_se:.3g})",
            f"rhs (event divergence):   {self.rhs:.6g} (se {self.rhs_se:.3g})",
            f"event probability:        {self.p_event:.6g} vs {self.p_event_alt:.6g}"
            + ("  [boundary]" if self.boundary else ""),
            f"audit ({self.trials} trials/instance): {status}",
        ]


def likelihood_ratio_audit(
    mu: BernoulliInstance,
    mu_alt: BernoulliInstance,
    policy: RoundRobinPolicy,
    event: Callable[[Transcript], bool],
    trials: int,
    seed: int,
) -> AuditResult:
    """Monte Carlo check that the divergence paid by a sampling policy bounds
    the divergence between any event's probabilities under the two instances:

        sum_i E_mu[T_i] * d(mu_i, mu'_i)  >=  d(P_mu[E], P_mu'[E])

    Trials under mu run on streams (seed, 0..trials-1), trials under mu_alt on
    (seed, trials..2*trials-1). The audit passes when
    lhs + 3*se_lhs >= rhs - 3*se_rhs; event probability estimates of exactly 0
    or 1 are flagged as boundary (the right side is then extended-real).
    """
    if mu.n != mu_alt.n:
        raise ValueError(f"instances differ in arm count: {mu.n} vs {mu_alt.n}")
    if not isinstance(trials, (int, np.integer)) or isinstance(trials, bool) or trials < 2:
        raise ValueError(f"trials must be an integer >= 2, got {trials!r}")
    trials = int(trials)
    d_vec = np.array([bernoulli_kl(float(a), float(b)) for a, b in zip(mu.means, mu_alt.means)])

    lhs_vals = np.empty(trials)
    hits = 0
    for t in range(trials):
        transcript = policy.run(mu, RngStream(seed, t))
        counts = transcript.pull_counts()
        terms = np.where(counts > 0, counts * d_vec, 0.0)
        lhs_vals[t] = float(terms.sum())
        hits += bool(event(transcript))
    p1 = hits / trials

    hits_alt = 0
    for t in range(trials):
        transcript = policy.run(mu_alt, RngStream(seed, trials + t))
        hits_alt += bool(event(transcript))
    p2 = hits_alt / trials

    if np.all(np.isfinite(lhs_vals)):
        lhs, lhs_se = _mean_se(lhs_vals)
    else:
        lhs, lhs_se = math.inf, 0.0

    rhs = bernoulli_kl(p1, p2)
    boundary = p1 in (0.0, 1.0) or p2 in (0.0, 1.0)
    if boundary or p1 == p2:
        rhs_se = 0.0
    else:
        dp1 = math.log(p1 * (1.0 - p2) / (p2 * (1.0 - p1)))
        dp2 = (p2 - p1) / (p2 * (1.0 - p2))
        se1 = math.sqrt(p1 * (1.0 - p1) / trials)
        se2 = math.sqrt(p2 * (1.0 - p2) / trials)
        rhs_se = math.hypot(dp1 * se1, dp2 * se2)

    passed = lhs + 3.0 * lhs_se >= rhs - 3.0 * rhs_se
    return AuditResult(
        lhs=lhs,
        lhs_se=lhs_se,
        rhs=rhs,
        rhs_se=rhs_se,
        p_event=p1,
        p_event_alt=p2,
        boundary=boundary,
        passed=passed,
        trials=trials,
    )


_AUDIT_KEYS = frozenset({"mu", "mu_alt", "pulls_per_arm", "event", "trials", "seed"})
_EVENT_KEYS = frozenset({"kind", "arm", "than", "value"})


def load_audit_config(path: str) -> dict:
    """Parse an audit config JSON into likelihood_ratio_audit keyword args."""
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"audit config {path} is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ConfigError("audit config must be a JSON object")
    unknown = set(obj) - _AUDIT_KEYS
    if unknown:
        raise ConfigError(f"unknown audit config keys: {sorted(unknown)}")
    missing = _AUDIT_KEYS - set(obj)
    if missing:
        raise ConfigError(f"audit config missing keys: {sorted(missing)}")
    try:
        mu = instance_from_spec(obj["mu"])
        mu_alt = instance_from_spec(obj["mu_alt"])
        policy = RoundRobinPolicy(obj["pulls_per_arm"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    event_spec = obj["event"]
    if not isinstance(event_spec, dict) or set(event_spec) - _EVENT_KEYS:
        raise ConfigError(f"bad event spec: {event_spec!r}")
    kind = event_spec.get("kind")
    if kind == "mean-exceeds":
        if "arm" not in event_spec or "than" not in event_spec:
            raise ConfigError("event 'mean-exceeds' needs 'arm' and 'than'")
        event = event_mean_exceeds(event_spec["arm"], event_spec["than"])
    elif kind == "always":
        event = event_constant(bool(event_spec.get("value", True)))
    else:
        raise ConfigError(f"unknown event kind {kind!r}")
    trials = obj["trials"]
    seed = obj["seed"]
    if not isinstance(trials, int) or isinstance(trials, bool) or trials < 2:
        raise ConfigError(f"trials must be an integer >= 2, got {trials!r}")
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return {
        "mu": mu,
        "mu_alt": mu_alt,
        "policy": policy,
        "event": event,
        "trials": trials,
        "seed": seed,
    }
