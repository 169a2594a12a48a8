"""Active query generation: random, information gain, and max regret."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .belief import Belief
from .errors import InvalidInputError
from .trajectories import Query, TrajectorySet, best_rows
from .users import slider_grid

_LOG2 = float(np.log(2.0))


@dataclass(frozen=True)
class QueryPolicy:
    """How the next query is picked.

    candidate_budget bounds the number of scored candidates per round
    (ordered trajectory pairs for information gain, posterior sample pairs
    for max regret); epsilon is the slider grid assumed for the lookahead.
    """

    kind: str = "random"
    candidate_budget: int = 2000
    epsilon: float = 0.1
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("random", "info_gain", "max_regret"):
            raise InvalidInputError(f"unknown policy kind {self.kind!r}")
        if self.candidate_budget < 1:
            raise InvalidInputError("candidate_budget must be >= 1")


def random_query(tset: TrajectorySet, rng: np.random.Generator) -> Query:
    """Uniformly random ordered pair of distinct trajectories."""
    n = len(tset)
    if n < 2:
        raise InvalidInputError("need at least 2 trajectories to form a query")
    i = int(rng.integers(n))
    j = int(rng.integers(n - 1))
    if j >= i:
        j += 1
    return Query(tset.items[i].id, tset.items[j].id)


def _outcome_information(psi: np.ndarray, weights: np.ndarray, sigma: float,
                         epsilon: float) -> np.ndarray:
    """Mutual information (bits) between the slider outcome and the belief.

    psi: ideal responses, shape (n_queries, n_samples); weights: belief
    sample weights.  Outcome probabilities for the whole grid are built
    from one stacked normal-cdf evaluation per call.
    """
    grid = slider_grid(epsilon)
    thresholds = 0.5 * (grid[:-1] + grid[1:])
    cdf = ndtr((thresholds[:, None, None] - psi[None]) / sigma)  # (g-1, q, m)
    probs = np.empty((len(grid), *psi.shape))
    probs[0] = cdf[0]
    probs[1:-1] = np.diff(cdf, axis=0)
    probs[-1] = 1.0 - cdf[-1]
    np.clip(probs, 0.0, 1.0, out=probs)
    marginal = probs @ weights  # (g, q)
    # p*log(p) with the 0 case neutralized; the offset is below double precision
    plogp = (probs * np.log(probs + 1e-300)) @ weights
    mlogm = marginal * np.log(marginal + 1e-300)
    return (plogp - mlogm).sum(axis=0) / _LOG2


def _psi_for_diffs(diffs: np.ndarray, belief: Belief) -> np.ndarray:
    """Ideal responses of every belief sample to each feature diff; (q, m)."""
    denom = belief.samples_alpha * belief.sample_gaps()
    raw = diffs @ belief.samples_w.T
    with np.errstate(divide="ignore", invalid="ignore"):
        psi = np.where(denom > 0.0, raw / denom, 0.0)
    return np.clip(psi, -1.0, 1.0)


def info_gain_score(query: Query, belief: Belief, epsilon: float) -> float:
    """Expected entropy reduction (bits) from asking ``query``."""
    diff = belief.tset.feature_diff(query)
    psi = _psi_for_diffs(diff[None, :], belief)
    return float(_outcome_information(psi, belief.weights, belief.sigma, epsilon)[0])


def _candidate_pairs(tset: TrajectorySet, budget: int,
                     rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Ordered distinct index pairs: exhaustive when they fit in the budget."""
    n = len(tset)
    if n * (n - 1) <= budget:
        grid_p, grid_q = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        mask = grid_p != grid_q
        return grid_p[mask], grid_q[mask]
    p = rng.integers(n, size=budget)
    q = rng.integers(n - 1, size=budget)
    q = np.where(q >= p, q + 1, q)
    return p, q


def select_info_gain(belief: Belief, tset: TrajectorySet, policy: QueryPolicy,
                     rng: np.random.Generator) -> Query:
    """Highest-information query among the sampled candidates.

    Exact score ties resolve to the first candidate in the seeded order.
    """
    if len(tset) < 2:
        raise InvalidInputError("need at least 2 trajectories to form a query")
    rows_p, rows_q = _candidate_pairs(tset, policy.candidate_budget, rng)
    diffs = tset.feature_matrix[rows_p] - tset.feature_matrix[rows_q]
    psi = _psi_for_diffs(diffs, belief)
    scores = _outcome_information(psi, belief.weights, belief.sigma, policy.epsilon)
    best = int(np.argmax(scores))
    return Query(tset.items[int(rows_p[best])].id, tset.items[int(rows_q[best])].id)


def max_regret_score(user_p: tuple[np.ndarray, float], user_q: tuple[np.ndarray, float],
                     tset: TrajectorySet) -> tuple[float, Query]:
    """Mutual regret of two weight hypotheses plus their optimal-pair query."""
    w_p, _ = user_p
    w_q, _ = user_q
    rows = best_rows(np.vstack([w_p, w_q]), tset)
    feats = tset.feature_matrix
    regret_pq = float((feats[rows[1]] - feats[rows[0]]) @ np.asarray(w_q, dtype=float))
    regret_qp = float((feats[rows[0]] - feats[rows[1]]) @ np.asarray(w_p, dtype=float))
    query = Query(tset.items[rows[0]].id, tset.items[rows[1]].id)
    return regret_pq + regret_qp, query


def select_max_regret(belief: Belief, tset: TrajectorySet, policy: QueryPolicy,
                      rng: np.random.Generator) -> Query:
    """Query showing the mutually worst pair of posterior samples.

    Pairs whose hypotheses share an optimal trajectory are skipped; if every
    sampled pair collapses that way (the posterior has effectively
    converged) the degenerate identical-pair query is returned as a signal.
    """
    m = len(belief)
    if m < 2:
        raise InvalidInputError("max regret selection needs at least 2 belief samples")
    rows = best_rows(belief.samples_w, tset)
    rewards = tset.feature_matrix @ belief.samples_w.T  # (n, m)
    own_best = rewards[rows, np.arange(m)]
    idx_p = rng.integers(m, size=policy.candidate_budget)
    idx_q = rng.integers(m - 1, size=policy.candidate_budget)
    idx_q = np.where(idx_q >= idx_p, idx_q + 1, idx_q)
    scores = (own_best[idx_q] - rewards[rows[idx_p], idx_q]) \
        + (own_best[idx_p] - rewards[rows[idx_q], idx_p])
    scores *= belief.weights[idx_p] * belief.weights[idx_q]
    informative = rows[idx_p] != rows[idx_q]
    if not informative.any():
        row = int(rows[idx_p[0]])
        return Query(tset.items[row].id, tset.items[row].id)
    scores = np.where(informative, scores, -np.inf)
    best = int(np.argmax(scores))
    return Query(tset.items[int(rows[idx_p[best]])].id,
                 tset.items[int(rows[idx_q[best]])].id)


def select_query(belief: Belief, tset: TrajectorySet, policy: QueryPolicy,
                 rng: np.random.Generator) -> Query:
    """Dispatch on the policy kind."""
    if policy.kind == "random":
        return random_query(tset, rng)
    if policy.kind == "info_gain":
        return select_info_gain(belief, tset, policy, rng)
    return select_max_regret(belief, tset, policy, rng)
