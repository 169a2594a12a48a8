"""Posterior inference over reward weights and the saturation parameter.

Observation model: a user's ideal slider position for a query is the reward
difference divided by (saturation x maximum reward gap), clamped to [-1, 1];
the recorded value is that position plus Gaussian noise, snapped to the
slider grid.  The likelihood of a recorded value is therefore the Gaussian
mass of the grid bucket it owns, evaluated at the model's ideal position.

The posterior over (weights, saturation) has no closed form; it is
represented by a sample set produced by an annealed sequential Monte Carlo
ensemble with random-walk Metropolis moves, one particle per sample.
Distributional accuracy is pinned by a grid-integration oracle in the test
suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import logsumexp, ndtr

from .errors import DegeneratePosteriorError, InvalidInputError
from .trajectories import (
    TrajectorySet,
    alignment,
    relative_reward,
    reward_gap,
    reward_gaps,
)
from .users import FeedbackRecord, slider_grid

ALPHA_MIN = 0.05
LIKELIHOOD_FLOOR = 1e-12


def _bucket_bounds(mu: float, epsilon: float) -> tuple[float, float]:
    """Noise interval that rounds to ``mu`` on the epsilon grid.

    Buckets are delimited by midpoints between neighboring grid points; the
    outermost buckets absorb the clamped tails.  For a uniform grid this is
    exactly the mu +/- epsilon/2 window, with the +/-1 cases one-sided.
    """
    grid = slider_grid(epsilon)
    idx = int(np.argmin(np.abs(grid - mu)))
    if abs(grid[idx] - mu) > 1e-9:
        raise InvalidInputError(
            f"slider value {mu} is not on the grid with step {epsilon}"
        )
    lo = -np.inf if idx == 0 else 0.5 * (grid[idx - 1] + grid[idx])
    hi = np.inf if idx == len(grid) - 1 else 0.5 * (grid[idx] + grid[idx + 1])
    return lo, hi


def feedback_likelihood(mu: float, psi: float, sigma: float, epsilon: float) -> float:
    """Probability of recording ``mu`` when the ideal slider position is ``psi``."""
    if sigma <= 0.0:
        raise InvalidInputError("sigma must be positive")
    lo, hi = _bucket_bounds(mu, epsilon)
    upper = ndtr((hi - psi) / sigma) if np.isfinite(hi) else 1.0
    lower = ndtr((lo - psi) / sigma) if np.isfinite(lo) else 0.0
    return float(upper - lower)


def model_response(w: np.ndarray, alpha: float, diff: np.ndarray, gap: float) -> float:
    """Ideal slider position a user (w, alpha) would give for a feature diff."""
    if gap <= 0.0:
        return 0.0
    return float(np.clip(float(diff @ w) / (alpha * gap), -1.0, 1.0))


def query_likelihood(
    record: FeedbackRecord,
    w: np.ndarray,
    alpha: float,
    sigma: float,
    tset: TrajectorySet,
) -> float:
    """Likelihood of one record under hypothesis (w, alpha)."""
    diff = tset.feature_diff(record.query)
    gap = reward_gap(w, tset)
    psi = model_response(np.asarray(w, dtype=float), alpha, diff, gap)
    return feedback_likelihood(record.mu, psi, sigma, record.epsilon)


class _DatasetKernel:
    """Precomputed, vectorized log-likelihood of a dataset over many samples."""

    def __init__(self, dataset: list[FeedbackRecord], sigma: float, tset: TrajectorySet,
                 floor: float = LIKELIHOOD_FLOOR):
        self.tset = tset
        self.sigma = float(sigma)
        self.floor = float(floor)
        self.diffs = np.array([tset.feature_diff(r.query) for r in dataset]) \
            if dataset else np.zeros((0, tset.dimension))
        bounds = [_bucket_bounds(r.mu, r.epsilon) for r in dataset]
        self.lo = np.array([b[0] for b in bounds]) if dataset else np.zeros(0)
        self.hi = np.array([b[1] for b in bounds]) if dataset else np.zeros(0)

    def psi_model(self, weights: np.ndarray, alphas: np.ndarray,
                  gaps: np.ndarray | None = None) -> np.ndarray:
        """Ideal responses for all records x samples; shape (k, m)."""
        if gaps is None:
            gaps = reward_gaps(weights, self.tset)
        raw = self.diffs @ weights.T
        denom = alphas * gaps
        with np.errstate(divide="ignore", invalid="ignore"):
            psi = np.where(denom > 0.0, raw / denom, 0.0)
        return np.clip(psi, -1.0, 1.0)

    def log_likelihood(self, weights: np.ndarray, alphas: np.ndarray,
                       gaps: np.ndarray | None = None) -> np.ndarray:
        """Floored log-likelihood summed over records; shape (m,)."""
        if len(self.lo) == 0:
            return np.zeros(len(weights))
        psi = self.psi_model(weights, alphas, gaps)
        k = len(self.lo)
        # one vectorized normal-cdf call; ndtr maps +/-inf bounds to 1 and 0
        bounds = np.concatenate([self.hi, self.lo])[:, None]
        cdf = ndtr((bounds - np.tile(psi, (2, 1))) / self.sigma)
        probs = np.maximum(cdf[:k] - cdf[k:], self.floor)
        return np.log(probs).sum(axis=0)


def log_posterior(
    w: np.ndarray,
    alpha: float,
    dataset: list[FeedbackRecord],
    sigma: float,
    tset: TrajectorySet,
    floor: float = LIKELIHOOD_FLOOR,
) -> float:
    """Unnormalized log posterior; the uniform prior contributes a dropped constant.

    Each record's likelihood is floored so a single model-violating answer
    cannot annihilate the posterior.
    """
    kernel = _DatasetKernel(dataset, sigma, tset, floor)
    w = np.asarray(w, dtype=float)
    return float(kernel.log_likelihood(w[None, :], np.array([alpha]))[0])


@dataclass(frozen=True)
class PosteriorEstimate:
    """Posterior mean weights (renormalized) and mean saturation."""

    w_hat: np.ndarray
    alpha_hat: float


@dataclass(frozen=True)
class Belief:
    """Weighted sample approximation of the joint posterior.

    weights are uniform when the samples come from the MCMC ensemble; the
    dataset and sigma are kept so the belief can be re-derived and exported.
    """

    samples_w: np.ndarray
    samples_alpha: np.ndarray
    weights: np.ndarray
    dataset: tuple[FeedbackRecord, ...]
    sigma: float
    tset: TrajectorySet
    _gaps: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.samples_w) < 1:
            raise InvalidInputError("a belief needs at least one sample")
        if abs(float(self.weights.sum()) - 1.0) > 1e-9:
            raise InvalidInputError("belief weights must sum to 1")

    def __len__(self) -> int:
        return len(self.samples_alpha)

    def sample_gaps(self) -> np.ndarray:
        """Maximum reward gap for every sample, computed once and cached."""
        if self._gaps is None:
            object.__setattr__(self, "_gaps", reward_gaps(self.samples_w, self.tset))
        return self._gaps

    def to_snapshot(self) -> dict:
        return {
            "samples": [[*map(float, w), float(a)]
                        for w, a in zip(self.samples_w, self.samples_alpha)],
            "weights": [float(x) for x in self.weights],
            "sigma": float(self.sigma),
        }


def belief_from_snapshot(obj: dict, tset: TrajectorySet,
                         dataset: list[FeedbackRecord] | None = None) -> Belief:
    samples = np.asarray(obj["samples"], dtype=float)
    return Belief(
        samples_w=samples[:, :-1],
        samples_alpha=samples[:, -1],
        weights=np.asarray(obj["weights"], dtype=float),
        dataset=tuple(dataset or ()),
        sigma=float(obj["sigma"]),
        tset=tset,
    )


@dataclass(frozen=True)
class SamplerSettings:
    """Knobs of the posterior sampling ensemble.

    One particle per returned sample.  The likelihood is annealed over
    n_stages; each stage reweights the particles, resamples them when the
    effective sample size drops below half, and then applies mh_moves
    random-walk Metropolis sweeps (geodesic steps on the weight sphere,
    reflected Gaussian steps for the saturation).  Step sizes adapt toward
    a moderate acceptance rate so concentrated posteriors still mix.
    """

    n_stages: int = 24
    mh_moves: int = 6
    weight_step: float = 0.15
    alpha_step: float = 0.1
    alpha_min: float = ALPHA_MIN
    likelihood_floor: float = LIKELIHOOD_FLOOR


DEFAULT_SAMPLER = SamplerSettings()


def _reflect(x: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Fold values back into [lo, hi] by reflection at the boundaries."""
    span = hi - lo
    y = np.mod(x - lo, 2.0 * span)
    y = np.where(y > span, 2.0 * span - y, y)
    return lo + y


def prior_samples(dimension: int, m: int, rng: np.random.Generator,
                  alpha_min: float = ALPHA_MIN) -> tuple[np.ndarray, np.ndarray]:
    """Uniform sphere x uniform saturation prior draws."""
    w = rng.standard_normal((m, dimension))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    a = rng.uniform(alpha_min, 1.0, size=m)
    return w, a


def _systematic_resample(weights: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    m = len(weights)
    positions = (rng.uniform() + np.arange(m)) / m
    return np.searchsorted(np.cumsum(weights), positions).clip(max=m - 1)


def _mh_sweep(w, a, ll, beta, kernel, rng, w_step, a_step, alpha_min):
    """One vectorized Metropolis sweep at inverse temperature ``beta``."""
    m, d = w.shape
    noise = rng.standard_normal((m, d))
    noise -= np.einsum("ij,ij->i", noise, w)[:, None] * w
    norms = np.linalg.norm(noise, axis=1, keepdims=True)
    norms[norms < 1e-12] = 1.0
    theta = w_step * rng.standard_normal((m, 1))
    w_prop = np.cos(theta) * w + np.sin(theta) * (noise / norms)
    w_prop /= np.linalg.norm(w_prop, axis=1, keepdims=True)
    a_prop = _reflect(a + a_step * rng.standard_normal(m), alpha_min, 1.0)
    ll_prop = kernel.log_likelihood(w_prop, a_prop)
    accept = np.log(rng.uniform(size=m)) < beta * (ll_prop - ll)
    w[accept] = w_prop[accept]
    a[accept] = a_prop[accept]
    ll[accept] = ll_prop[accept]
    return float(accept.mean())


def sample_posterior(
    tset: TrajectorySet,
    dataset: list[FeedbackRecord],
    sigma: float,
    m: int,
    rng: np.random.Generator,
    settings: SamplerSettings = DEFAULT_SAMPLER,
) -> Belief:
    """Draw ``m`` approximate posterior samples of (weights, saturation).

    Annealed sequential Monte Carlo with one particle per sample: particles
    start at the prior, the likelihood is tempered in linearly, and every
    stage reweights / resamples / moves the whole particle set in
    vectorized numpy operations.  Resampling keeps separated posterior
    modes at their correct relative masses, which plain parallel chains get
    wrong.  With an empty dataset the prior is returned directly.
    """
    if m < 1:
        raise InvalidInputError("m must be >= 1")
    if sigma <= 0.0:
        raise InvalidInputError("sigma must be positive")
    d = tset.dimension
    weights_uniform = np.full(m, 1.0 / m)
    w, a = prior_samples(d, m, rng, settings.alpha_min)
    if not dataset:
        return Belief(w, a, weights_uniform, tuple(), sigma, tset)

    kernel = _DatasetKernel(list(dataset), sigma, tset, settings.likelihood_floor)
    ll = kernel.log_likelihood(w, a)
    log_weights = np.zeros(m)
    w_scale, a_scale = 1.0, 1.0
    for stage in range(1, settings.n_stages + 1):
        delta_beta = 1.0 / settings.n_stages
        beta = stage / settings.n_stages
        log_weights = log_weights + delta_beta * ll
        log_weights -= logsumexp(log_weights)
        ess = 1.0 / np.exp(logsumexp(2.0 * log_weights))
        if ess < 0.5 * m or stage == settings.n_stages:
            idx = _systematic_resample(np.exp(log_weights), rng)
            w, a, ll = w[idx].copy(), a[idx].copy(), ll[idx].copy()
            log_weights = np.zeros(m)
        accepted = 0.0
        for _ in range(settings.mh_moves):
            accepted += _mh_sweep(w, a, ll, beta, kernel, rng,
                                  settings.weight_step * w_scale,
                                  settings.alpha_step * a_scale,
                                  settings.alpha_min)
        accepted /= settings.mh_moves
        # steer the step sizes toward a healthy acceptance rate
        adjust = np.exp(0.5 * (accepted - 0.3))
        w_scale = float(np.clip(w_scale * adjust, 0.02, 2.0))
        a_scale = float(np.clip(a_scale * adjust, 0.02, 2.0))
    return Belief(w, a, weights_uniform, tuple(dataset), sigma, tset)


def mean_weight(belief: Belief) -> PosteriorEstimate:
    """Posterior mean: weighted average weights renormalized to the sphere."""
    mean_w = belief.weights @ belief.samples_w
    norm = float(np.linalg.norm(mean_w))
    if norm < 1e-12:
        raise DegeneratePosteriorError("posterior mean weight vector is zero")
    alpha_hat = float(belief.weights @ belief.samples_alpha)
    return PosteriorEstimate(w_hat=mean_w / norm, alpha_hat=alpha_hat)


def validation_log_likelihood(
    validation: list[FeedbackRecord],
    belief: Belief,
    log_floor: float = math.log(LIKELIHOOD_FLOOR),
) -> float:
    """Log of the belief-averaged probability of a held-out record set.

    Computed in log space: logsumexp over samples of (log weight + summed
    record log-likelihoods), each record evaluated on its own grid.
    """
    if not validation:
        raise InvalidInputError("validation set must be non-empty")
    kernel = _DatasetKernel(list(validation), belief.sigma, belief.tset)
    per_sample = kernel.log_likelihood(belief.samples_w, belief.samples_alpha,
                                       belief.sample_gaps())
    with np.errstate(divide="ignore"):
        total = float(logsumexp(per_sample + np.log(belief.weights)))
    return total if np.isfinite(total) else log_floor


def noiseless_feasible(
    w: np.ndarray,
    alpha: float,
    dataset: list[FeedbackRecord],
    tset: TrajectorySet,
    tol: float = 1e-7,
) -> bool:
    """Whether (w, alpha) is consistent with every record under the noiseless model.

    Saturated answers impose one-sided inequalities on the reward
    difference; interior answers impose the equality diff = mu * alpha *
    gap(w), tested within ``tol``.
    """
    w = np.asarray(w, dtype=float)
    gap = reward_gap(w, tset)
    for record in dataset:
        diff = float(tset.feature_diff(record.query) @ w)
        rhs = record.mu * alpha * gap
        if record.mu >= 1.0:
            if diff < rhs - tol:
                return False
        elif record.mu <= -1.0:
            if diff > rhs + tol:
                return False
        elif abs(diff - rhs) > tol:
            return False
    return True


def choice_feasible(
    w: np.ndarray,
    dataset: list[FeedbackRecord],
    tset: TrajectorySet,
    tol: float = 1e-7,
) -> bool:
    """Whether ``w`` matches the sign of every recorded preference.

    Neutral answers constrain nothing; otherwise the reward difference must
    carry the answer's sign (within ``tol``).
    """
    w = np.asarray(w, dtype=float)
    for record in dataset:
        if record.mu == 0.0:
            continue
        diff = float(tset.feature_diff(record.query) @ w)
        if record.mu * diff < -tol * abs(record.mu):
            return False
    return True


def feasibility_masks(
    weights: np.ndarray,
    alphas: np.ndarray,
    dataset: list[FeedbackRecord],
    tset: TrajectorySet,
    tol: float = 1e-7,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (scale-feasible, choice-feasible) masks over many samples."""
    weights = np.asarray(weights, dtype=float)
    gaps = reward_gaps(weights, tset)
    scale_ok = np.ones(len(weights), dtype=bool)
    choice_ok = np.ones(len(weights), dtype=bool)
    for record in dataset:
        diff = tset.feature_diff(record.query) @ weights.T
        rhs = record.mu * alphas * gaps
        if record.mu >= 1.0:
            scale_ok &= diff >= rhs - tol
        elif record.mu <= -1.0:
            scale_ok &= diff <= rhs + tol
        else:
            scale_ok &= np.abs(diff - rhs) <= tol
        if record.mu != 0.0:
            choice_ok &= record.mu * diff >= -tol * abs(record.mu)
    return scale_ok, choice_ok


def worst_case_error(
    belief: Belief,
    w_true: np.ndarray,
    measure: str,
    tset: TrajectorySet | None = None,
) -> float:
    """Largest posterior-discounted error the robot could make.

    Maximizes sample weight x (1 - measure(sample, w_true)) over the
    belief's samples; the continuous maximum is deliberately discretized to
    the sample set.
    """
    tset = tset or belief.tset
    w_true = np.asarray(w_true, dtype=float)
    if measure == "alignment":
        xi = np.array([alignment(w, w_true) for w in belief.samples_w])
    elif measure == "relative_reward":
        xi = np.array([relative_reward(w, w_true, tset) for w in belief.samples_w])
    else:
        raise InvalidInputError(f"unknown measure {measure!r}")
    return float(np.max(belief.weights * (1.0 - xi)))


def save_records(records: list[FeedbackRecord], path: str | Path) -> None:
    """JSON-lines dataset: one record object per line."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json()) + "\n")


def load_records(path: str | Path) -> list[FeedbackRecord]:
    path = Path(path)
    records = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                records.append(FeedbackRecord.from_json(json.loads(raw)))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise InvalidInputError(f"{path}:{lineno}: bad feedback record ({exc})") from exc
    return records
