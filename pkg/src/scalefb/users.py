"""Simulated users answering slider queries.

The slider runs from -1 (strong preference for the right option) to +1
(strong preference for the left one).  A noiseless user divides the reward
difference by a saturation threshold; a probabilistic user adds Gaussian
noise and snaps to the slider's discrete grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEnvironmentError, InvalidInputError
from .trajectories import Query, TrajectorySet, reward_gap


@dataclass(frozen=True)
class SimulatedUser:
    """Hidden preferences driving simulated slider answers.

    weights: unit-norm true reward weights.
    saturation: fraction of the maximum reward gap at which the slider pins
        to +/-1; in (0, 1].
    sigma: standard deviation of the Gaussian slider noise.
    epsilon: slider step size in (0, 1]; epsilon=1 degenerates to the
        three-option soft-choice interface.
    """

    weights: np.ndarray
    saturation: float
    sigma: float = 0.1
    epsilon: float = 0.1

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if not np.all(np.isfinite(w)):
            raise InvalidInputError("user weights must be finite")
        object.__setattr__(self, "weights", w)
        if not 0.0 < self.saturation <= 1.0:
            raise InvalidInputError("saturation must be in (0, 1]")
        if self.sigma < 0.0:
            raise InvalidInputError("sigma must be >= 0")
        if not 0.0 < self.epsilon <= 1.0:
            raise InvalidInputError("epsilon must be in (0, 1]")


@dataclass(frozen=True)
class FeedbackRecord:
    """One answered query: the slider value and the grid it was collected on.

    Slider-collected values lie on the epsilon grid; the grid membership is
    enforced where records enter from a slider (``noisy_response``, the
    session service), so that noiseless analysis may carry continuous
    values.
    """

    query: Query
    mu: float
    epsilon: float

    def __post_init__(self):
        if not -1.0 <= self.mu <= 1.0:
            raise InvalidInputError(f"slider value {self.mu} outside [-1, 1]")
        if not 0.0 < self.epsilon <= 1.0:
            raise InvalidInputError("epsilon must be in (0, 1]")

    def to_json(self) -> dict:
        return {
            "p_id": self.query.p_id,
            "q_id": self.query.q_id,
            "mu": self.mu,
            "epsilon": self.epsilon,
        }

    @staticmethod
    def from_json(obj: dict) -> "FeedbackRecord":
        return FeedbackRecord(
            query=Query(p_id=str(obj["p_id"]), q_id=str(obj["q_id"])),
            mu=float(obj["mu"]),
            epsilon=float(obj["epsilon"]),
        )


def slider_grid(epsilon: float) -> np.ndarray:
    """All slider positions for step size ``epsilon``, ascending.

    The grid is the integer multiples of epsilon inside [-1, 1], with the
    endpoints -1 and 1 always included (they are already grid points
    whenever 1/epsilon is an integer, e.g. 0.1 or 1).
    """
    if not 0.0 < epsilon <= 1.0:
        raise InvalidInputError("epsilon must be in (0, 1]")
    n_max = int(np.floor(1.0 / epsilon + 1e-9))
    points = np.arange(-n_max, n_max + 1) * epsilon
    if points[-1] < 1.0 - 1e-12:
        points = np.concatenate([[-1.0], points, [1.0]])
    points[0], points[-1] = -1.0, 1.0
    return points


def round_to_grid(x, epsilon: float):
    """Snap ``x`` to the nearest slider position, ties rounding away from zero.

    Accepts scalars or arrays; output is clamped to [-1, 1] because the grid
    is.
    """
    grid = slider_grid(epsilon)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    pos = np.searchsorted(grid, x.ravel())
    lo = np.clip(pos - 1, 0, len(grid) - 1)
    hi = np.clip(pos, 0, len(grid) - 1)
    d_lo = np.abs(x.ravel() - grid[lo])
    d_hi = np.abs(grid[hi] - x.ravel())
    # on an exact midpoint prefer the candidate farther from zero
    pick_hi = (d_hi < d_lo) | ((d_hi == d_lo) & (np.abs(grid[hi]) >= np.abs(grid[lo])))
    out = np.where(pick_hi, grid[hi], grid[lo])
    return float(out[0]) if scalar else out.reshape(x.shape)


def noiseless_response(user: SimulatedUser, query: Query, tset: TrajectorySet) -> float:
    """Ideal slider position: reward difference over the saturation threshold.

    The threshold is the user's saturation times the maximum reward gap of
    the whole set; the response clamps at +/-1 once the difference reaches
    it.
    """
    gap = reward_gap(user.weights, tset)
    if gap <= 0.0:
        raise DegenerateEnvironmentError(
            "all trajectories earn identical reward; slider responses are undefined"
        )
    diff = float(tset.feature_diff(query) @ user.weights)
    return float(np.clip(diff / (user.saturation * gap), -1.0, 1.0))


def noisy_response(
    user: SimulatedUser,
    query: Query,
    tset: TrajectorySet,
    rng: np.random.Generator,
) -> float:
    """Slider value actually recorded: noise added, then snapped to the grid."""
    ideal = noiseless_response(user, query, tset)
    noise = rng.normal(0.0, user.sigma) if user.sigma > 0 else 0.0
    return round_to_grid(ideal + noise, user.epsilon)


def respond(
    user: SimulatedUser,
    query: Query,
    tset: TrajectorySet,
    rng: np.random.Generator,
) -> FeedbackRecord:
    """Answer a query and package the result as a feedback record."""
    return FeedbackRecord(query=query, mu=noisy_response(user, query, tset, rng), epsilon=user.epsilon)
