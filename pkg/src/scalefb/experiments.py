"""Simulation campaigns: elicitation sessions, metric curves, noise calibration.

A session is one simulated user answering K actively generated queries with
the posterior rebuilt after every answer.  A benchmark runs a matrix of
(user, saturation) sessions for every policy arm on paired seeds and
aggregates per-iteration metric curves into plot-ready CSV files.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .belief import (
    DEFAULT_SAMPLER,
    Belief,
    PosteriorEstimate,
    SamplerSettings,
    mean_weight,
    sample_posterior,
    validation_log_likelihood,
    worst_case_error,
)
from .environments import EnvironmentSpec
from .errors import InvalidInputError
from .queries import QueryPolicy, random_query, select_query
from .seeding import (
    POSTERIOR_STREAM,
    RESPONSE_STREAM,
    SELECTION_STREAM,
    VALIDATION_STREAM,
    derive_rng,
    derive_seed,
)
from .trajectories import TrajectorySet, alignment, random_unit_vector, relative_reward
from .users import FeedbackRecord, SimulatedUser, respond

FEEDBACK_KINDS = ("scale", "soft_choice")
KNOWN_METRICS = ("alignment", "relative_reward", "log_likelihood", "worst_case_error")
DEFAULT_SIGMA_GRID = tuple(np.round(np.arange(1, 21) * 0.05, 2))


@dataclass(frozen=True)
class ExperimentConfig:
    environment: EnvironmentSpec
    policies: tuple[tuple[str, QueryPolicy], ...]
    n_users: int = 30
    alpha_grid: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    sigma_true: float = 0.1
    sigma_assumed: float = 0.1
    epsilon: float = 0.1
    rounds: int = 20
    posterior_samples: int = 100
    metrics: tuple[str, ...] = ("alignment", "relative_reward")
    validation_queries: int = 10
    seed: int = 0
    sampler: SamplerSettings = DEFAULT_SAMPLER
    out_dir: str = "results"

    def __post_init__(self):
        if self.rounds < 0:
            raise InvalidInputError("rounds must be >= 0")
        if self.n_users < 1:
            raise InvalidInputError("n_users must be >= 1")
        if not self.policies:
            raise InvalidInputError("at least one policy arm is required")
        for alpha in self.alpha_grid:
            if not 0.0 < alpha <= 1.0:
                raise InvalidInputError("alpha grid values must be in (0, 1]")
        for kind, _ in self.policies:
            if kind not in FEEDBACK_KINDS:
                raise InvalidInputError(f"unknown feedback kind {kind!r}")
        for metric in self.metrics:
            if metric not in KNOWN_METRICS:
                raise InvalidInputError(f"unknown metric {metric!r}")


@dataclass
class SessionResult:
    """History of one elicitation session, iteration 0 being the prior."""

    records: list[FeedbackRecord]
    estimates: list[PosteriorEstimate]
    metrics: dict[str, np.ndarray]
    final_belief: Belief


@dataclass(frozen=True)
class MetricCurve:
    policy: str
    metric: str
    mean: np.ndarray
    sd: np.ndarray
    n: int


@dataclass
class BenchmarkResult:
    curves: list[MetricCurve]
    # per arm label -> metric -> (n_sessions, rounds+1) array
    sessions: dict[str, dict[str, np.ndarray]]
    files: list[Path] = field(default_factory=list)


def arm_label(feedback_kind: str, policy: QueryPolicy) -> str:
    return f"{feedback_kind}-{policy.kind}"


def _session_metrics(belief: Belief, estimate: PosteriorEstimate, user: SimulatedUser,
                     tset: TrajectorySet, names: tuple[str, ...],
                     validation: list[FeedbackRecord]) -> dict[str, float]:
    values = {}
    for name in names:
        if name == "alignment":
            values[name] = alignment(estimate.w_hat, user.weights)
        elif name == "relative_reward":
            values[name] = relative_reward(estimate.w_hat, user.weights, tset)
        elif name == "log_likelihood":
            values[name] = validation_log_likelihood(validation, belief)
        elif name == "worst_case_error":
            values[name] = worst_case_error(belief, user.weights, "alignment", tset)
    return values


def run_session(
    user: SimulatedUser,
    tset: TrajectorySet,
    policy: QueryPolicy,
    feedback_kind: str,
    rounds: int,
    sigma_assumed: float,
    posterior_samples: int,
    seed: int,
    metrics: tuple[str, ...] = ("alignment", "relative_reward"),
    sampler: SamplerSettings = DEFAULT_SAMPLER,
    validation_queries: int = 10,
) -> SessionResult:
    """One user, K queries, posterior rebuilt after each answer.

    Soft choice is the scale pipeline with the slider step forced to 1 for
    both the simulated user and the belief lookahead; everything else is
    byte-identical, which keeps arms comparable under paired seeds.
    """
    if feedback_kind not in FEEDBACK_KINDS:
        raise InvalidInputError(f"unknown feedback kind {feedback_kind!r}")
    epsilon = 1.0 if feedback_kind == "soft_choice" else user.epsilon
    sim_user = replace(user, epsilon=epsilon)
    lookahead = replace(policy, epsilon=epsilon)

    validation: list[FeedbackRecord] = []
    if "log_likelihood" in metrics:
        # held-out scale queries on the user's native grid
        val_rng = derive_rng(seed, VALIDATION_STREAM)
        validation = [respond(user, random_query(tset, val_rng), tset, val_rng)
                      for _ in range(validation_queries)]

    records: list[FeedbackRecord] = []
    belief = sample_posterior(tset, records, sigma_assumed, posterior_samples,
                              derive_rng(seed, POSTERIOR_STREAM, 0), sampler)
    estimate = mean_weight(belief)
    estimates = [estimate]
    history = [_session_metrics(belief, estimate, sim_user, tset, metrics, validation)]

    for k in range(1, rounds + 1):
        query = select_query(belief, tset, lookahead,
                             derive_rng(seed, SELECTION_STREAM, k))
        records.append(respond(sim_user, query, tset,
                               derive_rng(seed, RESPONSE_STREAM, k)))
        belief = sample_posterior(tset, records, sigma_assumed, posterior_samples,
                                  derive_rng(seed, POSTERIOR_STREAM, k), sampler)
        estimate = mean_weight(belief)
        estimates.append(estimate)
        history.append(_session_metrics(belief, estimate, sim_user, tset, metrics, validation))

    series = {name: np.array([row[name] for row in history]) for name in metrics}
    return SessionResult(records=records, estimates=estimates, metrics=series,
                         final_belief=belief)


def simulated_users(config: ExperimentConfig, dimension: int) -> list[tuple[int, float, SimulatedUser, int]]:
    """The paired (user index, saturation, user, session seed) matrix.

    Weights are drawn once per user index and shared across saturations and
    policy arms; the session seed depends only on (user, saturation) so
    every arm replays the same randomness.
    """
    rows = []
    for user_idx in range(config.n_users):
        w_star = random_unit_vector(dimension, derive_rng(config.seed, 11, user_idx))
        for alpha_idx, alpha in enumerate(config.alpha_grid):
            session_seed = derive_seed(config.seed, 10, user_idx, alpha_idx)
            user = SimulatedUser(weights=w_star, saturation=alpha,
                                 sigma=config.sigma_true, epsilon=config.epsilon)
            rows.append((user_idx, alpha, user, session_seed))
    return rows


def run_benchmark(config: ExperimentConfig, out_dir: str | Path | None = None,
                  write_files: bool = True) -> BenchmarkResult:
    """Run the full (users x saturations x policy arms) session matrix.

    Aggregation order is fixed by (arm, user, saturation) indices, so equal
    configs produce byte-identical CSV output.
    """
    tset = config.environment.build()
    matrix = simulated_users(config, tset.dimension)
    sessions: dict[str, dict[str, np.ndarray]] = {}
    raw_rows: list[tuple] = []
    for feedback_kind, policy in config.policies:
        label = arm_label(feedback_kind, policy)
        per_metric = {name: np.zeros((len(matrix), config.rounds + 1))
                      for name in config.metrics}
        for row_idx, (user_idx, alpha, user, session_seed) in enumerate(matrix):
            result = run_session(
                user, tset, policy, feedback_kind, config.rounds,
                config.sigma_assumed, config.posterior_samples, session_seed,
                metrics=config.metrics, sampler=config.sampler,
                validation_queries=config.validation_queries,
            )
            for name in config.metrics:
                per_metric[name][row_idx] = result.metrics[name]
                for iteration, value in enumerate(result.metrics[name]):
                    raw_rows.append((label, user_idx, alpha, name, iteration, value))
        sessions[label] = per_metric

    curves = []
    for feedback_kind, policy in config.policies:
        label = arm_label(feedback_kind, policy)
        for name in config.metrics:
            values = sessions[label][name]
            curves.append(MetricCurve(
                policy=label, metric=name,
                mean=values.mean(axis=0),
                sd=values.std(axis=0, ddof=1) if len(values) > 1 else np.zeros(values.shape[1]),
                n=len(values),
            ))

    result = BenchmarkResult(curves=curves, sessions=sessions)
    if write_files:
        target = Path(out_dir if out_dir is not None else config.out_dir)
        target.mkdir(parents=True, exist_ok=True)
        raw_path = target / "raw_results.csv"
        with raw_path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["policy", "user", "alpha", "metric", "iteration", "value"])
            for row in raw_rows:
                writer.writerow([row[0], row[1], repr(float(row[2])), row[3],
                                 row[4], repr(float(row[5]))])
        result.files.append(raw_path)
        result.files.extend(emit_plot_data(curves, target))
    return result


def emit_plot_data(curves: list[MetricCurve], out_dir: str | Path) -> list[Path]:
    """One CSV per metric with the documented (iteration, policy, mean, sd, n) schema."""
    if not curves:
        raise InvalidInputError("no curves to write")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    metrics = []
    for curve in curves:
        if curve.metric not in metrics:
            metrics.append(curve.metric)
    for metric in metrics:
        subset = [c for c in curves if c.metric == metric]
        path = out_dir / f"curves_{metric}.csv"
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "policy", "mean", "sd", "n"])
            for iteration in range(len(subset[0].mean)):
                for curve in subset:
                    writer.writerow([iteration, curve.policy,
                                     repr(float(curve.mean[iteration])),
                                     repr(float(curve.sd[iteration])), curve.n])
        paths.append(path)
    return paths


def calibration_scores(
    training: list[list[FeedbackRecord]],
    validation: list[list[FeedbackRecord]],
    grid: tuple[float, ...],
    tset: TrajectorySet,
    posterior_samples: int = 100,
    seed: int = 0,
    sampler: SamplerSettings = DEFAULT_SAMPLER,
) -> list[tuple[float, float]]:
    """Total validation log-likelihood for each candidate noise level.

    For each sigma, every user's posterior is fit on their training records
    under that sigma and scored on their validation records under the same
    sigma; totals sum over users.
    """
    if not grid:
        raise InvalidInputError("sigma grid must be non-empty")
    if not training or not validation or len(training) != len(validation):
        raise InvalidInputError("training and validation need one non-empty dataset per user")
    for records in (*training, *validation):
        if not records:
            raise InvalidInputError("datasets must be non-empty")
    scores = []
    for sigma in grid:
        total = 0.0
        for user_idx, (train, val) in enumerate(zip(training, validation)):
            belief = sample_posterior(tset, train, sigma, posterior_samples,
                                      derive_rng(seed, 12, user_idx), sampler)
            total += validation_log_likelihood(val, belief)
        scores.append((float(sigma), total))
    return scores


def calibrate_sigma(
    training: list[list[FeedbackRecord]],
    validation: list[list[FeedbackRecord]],
    grid: tuple[float, ...] = DEFAULT_SIGMA_GRID,
    tset: TrajectorySet | None = None,
    posterior_samples: int = 100,
    seed: int = 0,
    sampler: SamplerSettings = DEFAULT_SAMPLER,
) -> float:
    """Noise level maximizing held-out log-likelihood; ties go to the smaller sigma."""
    if tset is None:
        raise InvalidInputError("a trajectory set is required to evaluate likelihoods")
    scores = calibration_scores(training, validation, grid, tset,
                                posterior_samples, seed, sampler)
    best_sigma, best_total = scores[0]
    for sigma, total in scores[1:]:
        if total > best_total:
            best_sigma, best_total = sigma, total
    return best_sigma


def parse_config(path: str | Path, env: dict | None = None) -> ExperimentConfig:
    """Read the key = value campaign format (documented in the README)."""
    env = os.environ if env is None else env
    raw: dict[str, str] = {}
    path = Path(path)
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        raw[key.strip()] = value.strip()

    def get(key, default=None):
        return raw.get(key, default)

    kind = get("env_kind", "synthetic")
    environment = EnvironmentSpec(
        kind=kind,
        dimension=int(get("env_dimension", 10)),
        n_trajectories=int(get("env_trajectories", 200)),
        seed=int(get("env_seed", 0)),
        path=get("env_path"),
    )
    budget = int(get("candidate_budget", 2000))
    policies = []
    for token in get("policies", "scale:info_gain").split(","):
        token = token.strip()
        if not token:
            continue
        try:
            feedback_kind, policy_kind = token.split(":")
        except ValueError:
            raise InvalidInputError(
                f"bad policy {token!r}, expected feedback:policy like scale:info_gain"
            ) from None
        policies.append((feedback_kind.strip(),
                         QueryPolicy(kind=policy_kind.strip(), candidate_budget=budget)))
    seed = int(env.get("SCALEFB_SEED", get("seed", 0)))
    sampler = replace(
        DEFAULT_SAMPLER,
        n_stages=int(get("sampler_stages", DEFAULT_SAMPLER.n_stages)),
        mh_moves=int(get("sampler_moves", DEFAULT_SAMPLER.mh_moves)),
    )
    return ExperimentConfig(
        environment=environment,
        policies=tuple(policies),
        n_users=int(get("n_users", 30)),
        alpha_grid=tuple(float(x) for x in get("alpha_grid", "0.25, 0.5, 0.75, 1.0").split(",")),
        sigma_true=float(get("sigma_true", 0.1)),
        sigma_assumed=float(get("sigma_assumed", 0.1)),
        epsilon=float(get("epsilon", 0.1)),
        rounds=int(get("rounds", 20)),
        posterior_samples=int(get("posterior_samples", 100)),
        metrics=tuple(m.strip() for m in get("metrics", "alignment, relative_reward").split(",")),
        validation_queries=int(get("validation_queries", 10)),
        seed=seed,
        sampler=sampler,
        out_dir=get("out_dir", "results"),
    )
