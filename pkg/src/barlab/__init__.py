"""Bandit best-arm-retention algorithms with a Monte Carlo verification
harness: mirror descent and median elimination as building blocks, the
retention strategies built on them, executable KL inequality checkers, and a
seeded experiment runner with CSV output."""

from .env import (
    BernoulliInstance,
    PullStats,
    RngStream,
    expected_gap,
    hard_instance,
    instance_from_spec,
    sample,
    sample_batch,
)
from .explore import (
    EliminationOutcome,
    FindBestOutcome,
    PacParams,
    RetentionResult,
    find_best,
    me_round_budget,
    median_elimination,
    pac_bar,
    r_bar_regret,
    r_bar_sample,
    rbar_regret_budgets,
    rbar_sample_budget,
    select_proportional,
)
from .harness import (
    AuditResult,
    ConfigError,
    ExperimentConfig,
    ExperimentRun,
    ExperimentSummary,
    RoundRobinPolicy,
    Transcript,
    TrialRecord,
    event_constant,
    event_mean_exceeds,
    likelihood_ratio_audit,
    load_config,
    read_records,
    run_experiment,
    run_trial,
    wilson_interval,
    write_records,
)
from .kl import (
    CheckResult,
    KlBoundPair,
    bai_kl_ratio,
    bai_kl_value,
    bar_kl_lower_bound,
    bernoulli_kl,
    check_kl_properties,
    kl_sum_lower_bound,
    log_inequalities_check,
)
from .osmd import (
    NumericError,
    OsmdConfig,
    SimplexDistribution,
    init_distribution,
    loss_estimate,
    mirror_step,
    run_osmd,
)
from .verify import check_osmd_properties, grid_minimize_mirror, run_verify

__version__ = "0.1.0"
