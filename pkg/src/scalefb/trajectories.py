"""Trajectories, linear rewards, regret, and the performance measures.

A trajectory is a feature vector with an identifier; a trajectory set is the
finite menu the planner optimizes over.  Rewards are linear in the features,
so every operation here reduces to dot products over the set's feature
matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateMeasureError, InvalidInputError


@dataclass(frozen=True)
class Trajectory:
    """A single option: a feature vector plus display metadata."""

    id: str
    features: np.ndarray
    label: str | None = None
    media_ref: str | None = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        if feats.ndim != 1:
            raise InvalidInputError(f"trajectory {self.id!r}: features must be a flat vector")
        if not np.all(np.isfinite(feats)):
            raise InvalidInputError(f"trajectory {self.id!r}: features must be finite")
        object.__setattr__(self, "features", feats)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "features": [float(x) for x in self.features],
            "label": self.label,
            "media_ref": self.media_ref,
        }


@dataclass(frozen=True)
class Query:
    """An ordered pair of trajectory ids shown side by side."""

    p_id: str
    q_id: str


class TrajectorySet:
    """Immutable, dimension-checked collection of trajectories.

    Keeps the feature matrix and an id-sorted row order cached; argmax
    operations break exact ties toward the lowest id so runs are
    deterministic.
    """

    def __init__(self, dimension: int, items: list[Trajectory] | tuple[Trajectory, ...]):
        if dimension < 1:
            raise InvalidInputError("dimension must be positive")
        items = tuple(items)
        if len(items) < 2:
            raise InvalidInputError("a trajectory set needs at least 2 items")
        ids = [t.id for t in items]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise InvalidInputError(f"duplicate trajectory ids: {dupes}")
        for t in items:
            if t.features.shape != (dimension,):
                raise InvalidInputError(
                    f"trajectory {t.id!r} has {t.features.shape[0]} features, expected {dimension}"
                )
        self.dimension = int(dimension)
        self.items = items
        self.feature_matrix = np.array([t.features for t in items])
        self.feature_matrix.setflags(write=False)
        self._row_of = {t.id: i for i, t in enumerate(items)}
        # row indices in ascending id order, for deterministic tie-breaking
        self._id_order = np.array(sorted(range(len(items)), key=lambda i: items[i].id))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, trajectory_id: str) -> Trajectory:
        try:
            return self.items[self._row_of[trajectory_id]]
        except KeyError:
            raise InvalidInputError(f"unknown trajectory id {trajectory_id!r}") from None

    def __contains__(self, trajectory_id: str) -> bool:
        return trajectory_id in self._row_of

    def row_of(self, trajectory_id: str) -> int:
        try:
            return self._row_of[trajectory_id]
        except KeyError:
            raise InvalidInputError(f"unknown trajectory id {trajectory_id!r}") from None

    def feature_diff(self, query: Query) -> np.ndarray:
        """Feature difference (left minus right) for a query."""
        return self[query.p_id].features - self[query.q_id].features

    def ids(self) -> list[str]:
        return [t.id for t in self.items]


def unit_vector(w) -> np.ndarray:
    """Rescale ``w`` to unit Euclidean norm."""
    w = np.asarray(w, dtype=float)
    norm = float(np.linalg.norm(w))
    if norm == 0.0 or not np.isfinite(norm):
        raise InvalidInputError("cannot normalize a zero or non-finite vector")
    return w / norm


def random_unit_vector(dimension: int, rng: np.random.Generator) -> np.ndarray:
    """Draw uniformly from the unit sphere."""
    while True:
        v = rng.standard_normal(dimension)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm


def _check_dim(w: np.ndarray, tset: TrajectorySet) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (tset.dimension,):
        raise InvalidInputError(f"weight vector has shape {w.shape}, expected ({tset.dimension},)")
    return w


def reward(traj: Trajectory, w) -> float:
    """Linear reward: dot product of the trajectory features with ``w``."""
    w = np.asarray(w, dtype=float)
    if w.shape != traj.features.shape:
        raise InvalidInputError(
            f"weight vector has shape {w.shape}, expected {traj.features.shape}"
        )
    return float(traj.features @ w)


def best_row(w, tset: TrajectorySet) -> int:
    """Row index of the reward argmax, exact ties broken toward the lowest id."""
    w = _check_dim(w, tset)
    ordered = tset._id_order
    rewards = tset.feature_matrix[ordered] @ w
    return int(ordered[int(np.argmax(rewards))])


def best_rows(weights: np.ndarray, tset: TrajectorySet) -> np.ndarray:
    """Vectorized ``best_row`` for a stack of weight vectors (m, d) -> (m,)."""
    ordered = tset._id_order
    rewards = tset.feature_matrix[ordered] @ np.asarray(weights, dtype=float).T
    return ordered[np.argmax(rewards, axis=0)]


def best_trajectory(w, tset: TrajectorySet) -> Trajectory:
    """The planner: reward argmax over the set."""
    return tset.items[best_row(w, tset)]


def regret(w, w_true, tset: TrajectorySet) -> float:
    """Reward lost under ``w_true`` when the plan is optimized for ``w`` instead."""
    w = _check_dim(w, tset)
    w_true = _check_dim(w_true, tset)
    chosen = best_trajectory(w, tset)
    ideal = best_trajectory(w_true, tset)
    return float((ideal.features - chosen.features) @ w_true)


def reward_gap(w, tset: TrajectorySet) -> float:
    """Largest reward difference between any two items under ``w``.

    Equals max reward minus min reward over the set, so it is O(n) rather
    than a pairwise sweep.
    """
    w = _check_dim(w, tset)
    rewards = tset.feature_matrix @ w
    return float(rewards.max() - rewards.min())


def reward_gaps(weights: np.ndarray, tset: TrajectorySet) -> np.ndarray:
    """Vectorized ``reward_gap`` for a stack of weight vectors (m, d) -> (m,)."""
    rewards = tset.feature_matrix @ np.asarray(weights, dtype=float).T
    return rewards.max(axis=0) - rewards.min(axis=0)


def alignment(w_hat, w_true) -> float:
    """Cosine similarity between estimated and true weights."""
    w_hat = np.asarray(w_hat, dtype=float)
    w_true = np.asarray(w_true, dtype=float)
    na, nb = np.linalg.norm(w_hat), np.linalg.norm(w_true)
    if na == 0.0 or nb == 0.0:
        raise InvalidInputError("alignment is undefined for zero vectors")
    return float(np.clip(w_hat @ w_true / (na * nb), -1.0, 1.0))


def relative_reward(w_hat, w_true, tset: TrajectorySet) -> float:
    """Reward of the trajectory optimized for ``w_hat``, relative to the true optimum.

    Reported as the raw ratio; a non-positive denominator makes the measure
    meaningless and raises instead of guessing a normalization.
    """
    w_hat = _check_dim(w_hat, tset)
    w_true = _check_dim(w_true, tset)
    achieved = reward(best_trajectory(w_hat, tset), w_true)
    optimum = reward(best_trajectory(w_true, tset), w_true)
    if optimum <= 0.0:
        raise DegenerateMeasureError(
            f"true optimum reward is {optimum}, relative reward is undefined"
        )
    return achieved / optimum


def save_trajectory_set(tset: TrajectorySet, path: str | Path,
                        note: str | None = None) -> None:
    """Write the JSON-lines format: a dimension header then one item per line.

    ``note`` lands in the header for provenance (e.g. generation rules); the
    loader ignores it.
    """
    path = Path(path)
    header: dict = {"dimension": tset.dimension}
    if note:
        header["note"] = note
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        for t in tset.items:
            fh.write(json.dumps(t.to_json()) + "\n")


def load_trajectory_set(path: str | Path) -> TrajectorySet:
    """Load the JSON-lines format, reporting offending line numbers on bad input."""
    path = Path(path)
    items: list[Trajectory] = []
    dimension = None
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise InvalidInputError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            if dimension is None:
                if "dimension" not in obj:
                    raise InvalidInputError(f"{path}:{lineno}: first line must be a dimension header")
                dimension = int(obj["dimension"])
                continue
            if "id" not in obj or "features" not in obj:
                raise InvalidInputError(f"{path}:{lineno}: item needs 'id' and 'features'")
            if obj["id"] in seen:
                raise InvalidInputError(f"{path}:{lineno}: duplicate trajectory id {obj['id']!r}")
            seen.add(obj["id"])
            features = obj["features"]
            if len(features) != dimension:
                raise InvalidInputError(
                    f"{path}:{lineno}: {len(features)} features, header says {dimension}"
                )
            items.append(
                Trajectory(
                    id=str(obj["id"]),
                    features=np.asarray(features, dtype=float),
                    label=obj.get("label"),
                    media_ref=obj.get("media_ref"),
                )
            )
    if dimension is None:
        raise InvalidInputError(f"{path}: empty file, expected a dimension header")
    if len(items) < 2:
        raise InvalidInputError(f"{path}: a trajectory set needs at least 2 items")
    return TrajectorySet(dimension, items)
