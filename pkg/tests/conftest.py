import numpy as np
import pytest

from scalefb import Trajectory, TrajectorySet


def make_set(feature_rows, ids=None):
    rows = [np.asarray(r, dtype=float) for r in feature_rows]
    ids = ids or [f"t{i}" for i in range(len(rows))]
    return TrajectorySet(len(rows[0]), [Trajectory(i, r) for i, r in zip(ids, rows)])


@pytest.fixture
def simple_set():
    # rewards under (1,0): +1, -1, 0 -> gap 2
    return make_set([(1, 0), (-1, 0), (0, 1)])
