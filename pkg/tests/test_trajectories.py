import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalefb import (
    InvalidInputError,
    DegenerateMeasureError,
    Trajectory,
    TrajectorySet,
    alignment,
    best_trajectory,
    load_trajectory_set,
    regret,
    relative_reward,
    reward,
    reward_gap,
    save_trajectory_set,
    unit_vector,
)
from conftest import make_set


def brute_force_best(w, tset):
    """Independent argmax oracle: full enumeration, lowest id on ties."""
    best = None
    for traj in tset:
        r = float(traj.features @ np.asarray(w, dtype=float))
        if best is None or r > best[0] or (r == best[0] and traj.id < best[1].id):
            best = (r, traj)
    return best[1]


def brute_force_gap(w, tset):
    """Independent gap oracle: all ordered pairs."""
    w = np.asarray(w, dtype=float)
    return max((p.features - q.features) @ w for p in tset for q in tset)


class TestReward:
    def test_unit_dot_product(self):
        assert reward(Trajectory("a", [1, 0]), [1, 0]) == 1.0

    def test_zero_features(self):
        assert reward(Trajectory("a", [0, 0]), [3.5, -2.0]) == 0.0

    def test_hand_evaluated(self):
        assert reward(Trajectory("a", [0.5, -0.5]), [0.6, 0.8]) == pytest.approx(-0.1)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            reward(Trajectory("a", [1, 0]), [1, 0, 0])


class TestBestTrajectory:
    def test_dominance(self):
        tset = make_set([(1, 0), (0, 1)])
        assert best_trajectory([1, 0], tset).id == "t0"

    def test_tie_breaks_to_lowest_id(self):
        tset = make_set([(1, 0), (1, 0)], ids=["b", "a"])
        assert best_trajectory([1, 0], tset).id == "a"

    def test_three_item_brute_force(self):
        tset = make_set([(1, 0), (0, 1), (0.8, 0.8)])
        chosen = best_trajectory([0.6, 0.8], tset)
        assert chosen.id == "t2"
        assert chosen is brute_force_best([0.6, 0.8], tset)

    def test_scale_invariance(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            tset = make_set(rng.normal(size=(6, 3)))
            w = rng.normal(size=3)
            base = best_trajectory(w, tset).id
            for c in (0.1, 2.0, 57.0):
                assert best_trajectory(c * w, tset).id == base

    def test_matches_brute_force_on_random_sets(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            tset = make_set(rng.normal(size=(rng.integers(2, 12), 4)))
            w = rng.normal(size=4)
            assert best_trajectory(w, tset).id == brute_force_best(w, tset).id


class TestRegret:
    def test_self_regret_zero(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            tset = make_set(rng.normal(size=(5, 3)))
            w = rng.normal(size=3)
            assert regret(w, w, tset) == 0.0

    def test_orthogonal_two_item(self):
        tset = make_set([(1, 0), (0, 1)])
        assert regret([0, 1], [1, 0], tset) == pytest.approx(1.0)

    def test_three_item_enumeration_oracle(self):
        # enumeration: the true-weight optimum is (0,1) with reward 1.0,
        # the chosen optimum under (1,0) is (1,0) with true reward 0.0
        tset = make_set([(1, 0), (0, 1), (0.9, 0.9)])
        w, w_true = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        ideal = brute_force_best(w_true, tset)
        chosen = brute_force_best(w, tset)
        expected = (ideal.features - chosen.features) @ w_true
        assert expected == pytest.approx(1.0)
        assert regret(w, w_true, tset) == pytest.approx(expected)

    def test_nonnegative_on_random_instances(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            tset = make_set(rng.normal(size=(7, 3)))
            assert regret(rng.normal(size=3), rng.normal(size=3), tset) >= -1e-12


class TestRewardGap:
    def test_two_point_gap(self):
        assert reward_gap([1, 0], make_set([(1, 0), (-1, 0)])) == pytest.approx(2.0)

    def test_identical_rows(self):
        assert reward_gap([0.3, 0.7], make_set([(0.5, 0.5), (0.5, 0.5)])) == 0.0

    def test_symmetric_weights(self):
        w = np.array([1.0, 1.0]) / np.sqrt(2)
        assert reward_gap(w, make_set([(1, 0), (0, 1)])) == pytest.approx(0.0)

    def test_equals_pairwise_enumeration(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            d = int(rng.integers(2, 6))
            tset = make_set(rng.normal(size=(rng.integers(2, 21), d)))
            w = rng.normal(size=d)
            assert reward_gap(w, tset) == pytest.approx(brute_force_gap(w, tset))
            assert reward_gap(w, tset) >= 0.0


class TestAlignment:
    def test_identity(self):
        assert alignment([0.3, -0.2, 0.9], [0.3, -0.2, 0.9]) == pytest.approx(1.0)

    def test_scale_invariance(self):
        assert alignment([2, 0], [1, 0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert alignment([1, 0], [0, 1]) == pytest.approx(0.0)

    def test_zero_vector_rejected(self):
        with pytest.raises(InvalidInputError):
            alignment([0, 0], [1, 0])

    @given(st.lists(st.floats(-10, 10), min_size=3, max_size=3),
           st.lists(st.floats(-10, 10), min_size=3, max_size=3),
           st.floats(0.01, 100), st.floats(0.01, 100))
    @settings(max_examples=60)
    def test_symmetric_and_positively_scale_invariant(self, a, b, ca, cb):
        a, b = np.array(a), np.array(b)
        if np.linalg.norm(a) < 1e-6 or np.linalg.norm(b) < 1e-6:
            return
        assert alignment(a, b) == pytest.approx(alignment(b, a))
        assert alignment(ca * a, cb * b) == pytest.approx(alignment(a, b), abs=1e-9)


class TestRelativeReward:
    def test_identity(self):
        tset = make_set([(1, 0), (0.2, 0.4)])
        assert relative_reward([1, 0], [1, 0], tset) == 1.0

    def test_opposite_pick(self):
        tset = make_set([(1, 0), (0, 1)])
        assert relative_reward([0, 1], [1, 0], tset) == pytest.approx(0.0)

    def test_near_miss(self):
        tset = make_set([(1, 0), (0.9, 0.1)])
        assert relative_reward([0, 1], [1, 0], tset) == pytest.approx(0.9)

    def test_one_when_argmax_agrees(self):
        rng = np.random.default_rng(5)
        hits = 0
        for _ in range(50):
            tset = make_set(rng.normal(size=(6, 3)))
            w_hat, w_true = rng.normal(size=3), rng.normal(size=3)
            if best_trajectory(w_hat, tset).id == best_trajectory(w_true, tset).id:
                hits += 1
                assert relative_reward(w_hat, w_true, tset) == pytest.approx(1.0)
        assert hits > 0

    def test_degenerate_denominator(self):
        tset = make_set([(-1, 0), (-2, 0)])
        with pytest.raises(DegenerateMeasureError):
            relative_reward([0, 1], [1, 0], tset)


class TestTypes:
    def test_non_finite_features_rejected(self):
        with pytest.raises(InvalidInputError):
            Trajectory("a", [1.0, np.nan])

    def test_set_needs_two_items(self):
        with pytest.raises(InvalidInputError):
            TrajectorySet(2, [Trajectory("a", [1, 0])])

    def test_set_rejects_duplicate_ids(self):
        with pytest.raises(InvalidInputError, match="duplicate"):
            TrajectorySet(2, [Trajectory("a", [1, 0]), Trajectory("a", [0, 1])])

    def test_set_rejects_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            TrajectorySet(2, [Trajectory("a", [1, 0]), Trajectory("b", [0, 1, 2])])

    def test_unit_vector(self):
        assert np.linalg.norm(unit_vector([3, 4])) == pytest.approx(1.0)
        with pytest.raises(InvalidInputError):
            unit_vector([0.0, 0.0])


class TestFileFormat:
    def test_round_trip(self, tmp_path):
        tset = make_set([(1, 0), (0, 1), (0.5, -0.5)])
        path = tmp_path / "set.jsonl"
        save_trajectory_set(tset, path)
        loaded = load_trajectory_set(path)
        assert loaded.dimension == tset.dimension
        assert loaded.ids() == tset.ids()
        assert np.array_equal(loaded.feature_matrix, tset.feature_matrix)

    def test_labels_and_media_preserved(self, tmp_path):
        tset = TrajectorySet(2, [
            Trajectory("a", [1, 0], label="left", media_ref="http://x/a.mp4"),
            Trajectory("b", [0, 1]),
        ])
        path = tmp_path / "set.jsonl"
        save_trajectory_set(tset, path)
        loaded = load_trajectory_set(path)
        assert loaded["a"].label == "left"
        assert loaded["a"].media_ref == "http://x/a.mp4"
        assert loaded["b"].label is None

    def test_dimension_mismatch_names_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"dimension": 2}\n'
                        '{"id": "a", "features": [1, 0]}\n'
                        '{"id": "b", "features": [1, 0, 3]}\n')
        with pytest.raises(InvalidInputError, match=":3"):
            load_trajectory_set(path)

    def test_bad_json_names_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"dimension": 2}\n{oops\n')
        with pytest.raises(InvalidInputError, match=":2"):
            load_trajectory_set(path)

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "dup.jsonl"
        path.write_text('{"dimension": 2}\n'
                        '{"id": "a", "features": [1, 0]}\n'
                        '{"id": "a", "features": [0, 1]}\n')
        with pytest.raises(InvalidInputError, match="duplicate"):
            load_trajectory_set(path)

    def test_too_few_items_rejected(self, tmp_path):
        path = tmp_path / "small.jsonl"
        path.write_text('{"dimension": 2}\n{"id": "a", "features": [1, 0]}\n')
        with pytest.raises(InvalidInputError):
            load_trajectory_set(path)
