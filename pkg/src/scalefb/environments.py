"""Trajectory set builders: synthetic feature spaces and the serving-task lattice."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .trajectories import Trajectory, TrajectorySet, load_trajectory_set

FETCH_DIMENSION = 8
LEVELS_4 = (0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0)


@dataclass(frozen=True)
class EnvironmentSpec:
    """Declarative environment choice for config files."""

    kind: str
    dimension: int = 10
    n_trajectories: int = 200
    seed: int = 0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in ("synthetic", "fetch", "file"):
            raise InvalidInputError(f"unknown environment kind {self.kind!r}")
        if self.kind == "synthetic" and self.dimension < 2:
            raise InvalidInputError("synthetic environments need dimension >= 2")
        if self.kind != "file" and self.n_trajectories < 2:
            raise InvalidInputError("need at least 2 trajectories")

    def build(self) -> TrajectorySet:
        if self.kind == "synthetic":
            return synthetic_env(self.dimension, self.n_trajectories,
                                 np.random.default_rng(self.seed))
        if self.kind == "fetch":
            return fetch_env(self.n_trajectories, np.random.default_rng(self.seed))
        if not self.path:
            raise InvalidInputError("file environments need a path")
        return load_trajectory_set(self.path)


def synthetic_env(dimension: int, n: int, rng: np.random.Generator,
                  decay: float = 0.68) -> TrajectorySet:
    """Random menu of near-optimal feature vectors.

    The achievable feature space is an axis-aligned ellipsoid with
    geometrically decaying semi-axes (decay**i for axis i); real feature
    sets are similarly anisotropic, with a few directions carrying most of
    the spread, which is what makes the weights on minor directions slow to
    learn.  Each item is the ellipsoid point maximizing the reward of a
    randomly drawn unit weight vector, plus Gaussian jitter (std 0.1)
    rescaled back into the ellipsoid.  Exact duplicates are redrawn;
    decay=1 gives an isotropic unit-ball menu.
    """
    if dimension < 2 or n < 2:
        raise InvalidInputError("synthetic environments need dimension >= 2 and n >= 2")
    if not 0.0 < decay <= 1.0:
        raise InvalidInputError("decay must be in (0, 1]")
    axes = decay ** np.arange(dimension)
    seen = set()
    items = []
    while len(items) < n:
        direction = rng.standard_normal(dimension)
        direction /= np.linalg.norm(direction)
        # argmax of x . direction over the ellipsoid ||x / axes|| <= 1
        optimum = axes ** 2 * direction / np.linalg.norm(axes * direction)
        features = optimum + 0.1 * rng.standard_normal(dimension)
        stretch = np.linalg.norm(features / axes)
        if stretch > 1.0:
            features = features / stretch
        key = features.tobytes()
        if key in seen:
            continue
        seen.add(key)
        items.append(Trajectory(id=f"traj-{len(items):04d}", features=features))
    return TrajectorySet(dimension, items)


def fetch_valid_combinations() -> list[tuple[float, ...]]:
    """The feature lattice of the serving task.

    Features: end-effector speed and max height on four levels, a one-hot
    drink choice over three drinks, pan orientation, moving over (1) vs
    behind (0) the pan, and whether the pan is hit.  Hitting the pan is only
    possible when moving over it.
    """
    drinks = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)]
    combos = []
    for speed, height, drink, pan, over in itertools.product(
            LEVELS_4, LEVELS_4, drinks, (0.0, 1.0), (0.0, 1.0)):
        for hit in ((0.0, 1.0) if over == 1.0 else (0.0,)):
            combos.append((speed, height, *drink, pan, over, hit))
    return combos


def fetch_env(n: int, rng: np.random.Generator) -> TrajectorySet:
    """Sample ``n`` distinct serving-task trajectories from the lattice."""
    combos = fetch_valid_combinations()
    if n < 2 or n > len(combos):
        raise InvalidInputError(
            f"n must be between 2 and {len(combos)} (valid feature combinations)"
        )
    chosen = rng.choice(len(combos), size=n, replace=False)
    drinks = ("orange-juice", "water", "milk")
    items = []
    for rank, combo_idx in enumerate(chosen):
        combo = combos[combo_idx]
        drink = drinks[int(np.argmax(combo[2:5]))]
        label = (f"{drink}, speed {combo[0]:.2f}, height {combo[1]:.2f}, "
                 f"pan {'upright' if combo[5] else 'flat'}, "
                 f"{'over' if combo[6] else 'behind'} the pan"
                 + (", hits the pan" if combo[7] else ""))
        items.append(Trajectory(id=f"fetch-{rank:03d}",
                                features=np.array(combo), label=label))
    return TrajectorySet(FETCH_DIMENSION, items)
