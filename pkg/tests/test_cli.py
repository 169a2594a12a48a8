import json
import subprocess
import sys

import numpy as np
import pytest

import scalefb as s

CLI = [sys.executable, "-m", "scalefb.cli"]


def run_cli(*args, env=None):
    return subprocess.run([*CLI, *args], capture_output=True, text=True, env=env)


class TestGenEnv:
    def test_synthetic(self, tmp_path):
        out = tmp_path / "set.jsonl"
        result = run_cli("gen-env", "--kind", "synthetic", "--dimension", "4",
                         "--n", "25", "--seed", "3", "--out", str(out))
        assert result.returncode == 0, result.stderr
        tset = s.load_trajectory_set(out)
        assert tset.dimension == 4 and len(tset) == 25

    def test_fetch(self, tmp_path):
        out = tmp_path / "fetch.jsonl"
        result = run_cli("gen-env", "--kind", "fetch", "--n", "120",
                         "--seed", "0", "--out", str(out))
        assert result.returncode == 0, result.stderr
        tset = s.load_trajectory_set(out)
        assert tset.dimension == 8 and len(tset) == 120

    def test_same_seed_same_file(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run_cli("gen-env", "--kind", "synthetic", "--n", "10", "--seed", "5",
                "--out", str(a))
        run_cli("gen-env", "--kind", "synthetic", "--n", "10", "--seed", "5",
                "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestBench:
    CONFIG = (
        "seed = 2\n"
        "env_kind = synthetic\n"
        "env_dimension = 3\n"
        "env_trajectories = 12\n"
        "n_users = 2\n"
        "alpha_grid = 0.5, 1.0\n"
        "rounds = 2\n"
        "posterior_samples = 30\n"
        "sampler_stages = 8\n"
        "sampler_moves = 2\n"
        "candidate_budget = 20\n"
        "policies = scale:random, soft_choice:random\n"
        "metrics = alignment\n"
    )

    def test_runs_and_writes_csv(self, tmp_path):
        config = tmp_path / "c.cfg"
        config.write_text(self.CONFIG)
        result = run_cli("bench", "--config", str(config), "--out", str(tmp_path / "out"))
        assert result.returncode == 0, result.stderr
        curves = (tmp_path / "out" / "curves_alignment.csv").read_text().splitlines()
        assert curves[0] == "iteration,policy,mean,sd,n"
        assert len(curves) == 1 + 3 * 2  # header + (rounds+1) x 2 arms
        assert (tmp_path / "out" / "raw_results.csv").exists()
        assert "scale-random alignment" in result.stdout

    def test_seed_env_var_changes_results(self, tmp_path):
        config = tmp_path / "c.cfg"
        config.write_text(self.CONFIG)
        import os
        env = dict(os.environ, SCALEFB_SEED="99")
        run_cli("bench", "--config", str(config), "--out", str(tmp_path / "a"))
        run_cli("bench", "--config", str(config), "--out", str(tmp_path / "b"), env=env)
        assert (tmp_path / "a" / "raw_results.csv").read_text() \
            != (tmp_path / "b" / "raw_results.csv").read_text()

    def test_missing_config_fails_cleanly(self, tmp_path):
        result = run_cli("bench", "--config", str(tmp_path / "nope.cfg"))
        assert result.returncode != 0


class TestCalibrate:
    def test_end_to_end(self, tmp_path):
        rng = np.random.default_rng(0)
        tset = s.synthetic_env(3, 15, rng)
        set_path = tmp_path / "set.jsonl"
        s.save_trajectory_set(tset, set_path)
        user = s.SimulatedUser(weights=s.random_unit_vector(3, rng),
                               saturation=0.5, sigma=0.3, epsilon=0.1)
        train = [s.respond(user, s.random_query(tset, rng), tset, rng)
                 for _ in range(12)]
        val = [s.respond(user, s.random_query(tset, rng), tset, rng)
               for _ in range(6)]
        train_path, val_path = tmp_path / "train.jsonl", tmp_path / "val.jsonl"
        s.save_records(train, train_path)
        s.save_records(val, val_path)
        result = run_cli("calibrate", "--train", str(train_path),
                         "--val", str(val_path), "--set", str(set_path),
                         "--grid", "0.2,0.4", "--posterior-samples", "40")
        assert result.returncode == 0, result.stderr
        assert "calibrated sigma:" in result.stdout
        assert result.stdout.split(":")[-1].strip() in ("0.2", "0.4")

    def test_records_round_trip(self, tmp_path):
        records = [s.FeedbackRecord(s.Query("a", "b"), mu=0.4, epsilon=0.1)]
        path = tmp_path / "r.jsonl"
        s.save_records(records, path)
        assert s.load_records(path) == records
        assert json.loads(path.read_text())["mu"] == 0.4


class TestHelp:
    @pytest.mark.parametrize("command", ["bench", "calibrate", "gen-env", "serve"])
    def test_subcommand_help(self, command):
        result = run_cli(command, "--help")
        assert result.returncode == 0
        assert command in result.stdout
