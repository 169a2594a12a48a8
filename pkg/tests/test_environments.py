import numpy as np
import pytest

import scalefb as s
from scalefb import EnvironmentSpec, InvalidInputError, fetch_env, synthetic_env
from scalefb.environments import LEVELS_4, fetch_valid_combinations


class TestSyntheticEnv:
    def test_benchmark_scale_shape(self):
        tset = synthetic_env(10, 200, np.random.default_rng(0))
        assert len(tset) == 200
        assert tset.dimension == 10
        assert len(set(tset.ids())) == 200

    def test_deterministic(self):
        a = synthetic_env(4, 30, np.random.default_rng(5))
        b = synthetic_env(4, 30, np.random.default_rng(5))
        assert np.array_equal(a.feature_matrix, b.feature_matrix)

    def test_feature_norms_bounded(self):
        tset = synthetic_env(6, 100, np.random.default_rng(1))
        norms = np.linalg.norm(tset.feature_matrix, axis=1)
        assert np.all(norms <= 1.0 + 1e-9)

    def test_isotropic_variant(self):
        tset = synthetic_env(3, 50, np.random.default_rng(2), decay=1.0)
        norms = np.linalg.norm(tset.feature_matrix, axis=1)
        assert np.all(norms <= 1.0 + 1e-9)
        # most items hug the unit sphere in the isotropic world
        assert np.mean(norms > 0.9) > 0.5

    def test_nondegenerate_reward_gaps(self):
        tset = synthetic_env(5, 50, np.random.default_rng(3))
        rng = np.random.default_rng(4)
        gaps = [s.reward_gap(s.random_unit_vector(5, rng), tset) for _ in range(200)]
        assert np.mean(np.array(gaps) > 0) >= 0.99

    def test_bad_arguments(self):
        with pytest.raises(InvalidInputError):
            synthetic_env(1, 10, np.random.default_rng(0))
        with pytest.raises(InvalidInputError):
            synthetic_env(3, 1, np.random.default_rng(0))
        with pytest.raises(InvalidInputError):
            synthetic_env(3, 10, np.random.default_rng(0), decay=0.0)


class TestFetchEnv:
    def test_study_scale_shape(self):
        tset = fetch_env(120, np.random.default_rng(0))
        assert len(tset) == 120
        assert tset.dimension == 8

    def test_values_on_documented_domains(self):
        tset = fetch_env(120, np.random.default_rng(1))
        feats = tset.feature_matrix
        for column in (0, 1):  # speed, height
            assert set(np.round(feats[:, column], 9)) <= set(np.round(LEVELS_4, 9))
        assert set(feats[:, 5]) <= {0.0, 1.0}  # pan orientation
        assert set(feats[:, 6]) <= {0.0, 1.0}  # behind / over
        assert set(feats[:, 7]) <= {0.0, 1.0}  # hit

    def test_drink_one_hot(self):
        tset = fetch_env(100, np.random.default_rng(2))
        drinks = tset.feature_matrix[:, 2:5]
        assert np.all(drinks.sum(axis=1) == 1.0)
        assert set(drinks.ravel()) <= {0.0, 1.0}

    def test_hit_requires_over_pan(self):
        # holds for every valid combination, hence every sampled set
        for combo in fetch_valid_combinations():
            over, hit = combo[6], combo[7]
            assert hit == 0.0 or over == 1.0

    def test_items_are_distinct(self):
        tset = fetch_env(120, np.random.default_rng(3))
        rows = {tuple(row) for row in tset.feature_matrix}
        assert len(rows) == 120

    def test_lattice_size_and_overdraw(self):
        combos = fetch_valid_combinations()
        assert len(combos) == 4 * 4 * 3 * 2 * 3
        with pytest.raises(InvalidInputError):
            fetch_env(len(combos) + 1, np.random.default_rng(0))

    def test_deterministic(self):
        a = fetch_env(50, np.random.default_rng(9))
        b = fetch_env(50, np.random.default_rng(9))
        assert np.array_equal(a.feature_matrix, b.feature_matrix)


class TestEnvironmentSpec:
    def test_synthetic_build(self):
        spec = EnvironmentSpec(kind="synthetic", dimension=4, n_trajectories=20, seed=3)
        tset = spec.build()
        assert tset.dimension == 4 and len(tset) == 20
        assert np.array_equal(tset.feature_matrix, spec.build().feature_matrix)

    def test_file_round_trip(self, tmp_path):
        tset = synthetic_env(3, 10, np.random.default_rng(0))
        path = tmp_path / "env.jsonl"
        s.save_trajectory_set(tset, path)
        spec = EnvironmentSpec(kind="file", path=str(path))
        loaded = spec.build()
        assert np.array_equal(loaded.feature_matrix, tset.feature_matrix)

    def test_unknown_kind(self):
        with pytest.raises(InvalidInputError):
            EnvironmentSpec(kind="driver")

    def test_file_without_path(self):
        with pytest.raises(InvalidInputError):
            EnvironmentSpec(kind="file").build()
