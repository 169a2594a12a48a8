"""Drive the HTTP session service end to end, then replay it offline.

Uses the in-process test client so no server process is needed; against a
running `scalefb serve` instance the same calls work over the network.
"""

import tempfile
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

import scalefb as s
from scalefb.service import create_app, replay_session_log

data_dir = Path(tempfile.mkdtemp(prefix="scalefb-demo-"))
(data_dir / "sets").mkdir()
tset = s.synthetic_env(3, 30, np.random.default_rng(0))
s.save_trajectory_set(tset, data_dir / "sets" / "demo.jsonl")

client = TestClient(create_app(data_dir))
session_id = client.post("/sessions", json={
    "set_id": "demo",
    "policy": {"kind": "info_gain", "candidate_budget": 300, "seed": 42},
    "sigma": 0.35,
    "epsilon": 0.1,
}).json()["session_id"]
print("session:", session_id)

# a scripted human with a strong preference for the first feature
human = s.SimulatedUser(weights=np.array([1.0, 0.0, 0.0]), saturation=0.7,
                        sigma=0.05, epsilon=0.1)
rng = np.random.default_rng(1)
for round_idx in range(8):
    payload = client.get(f"/sessions/{session_id}/query").json()
    query = s.Query(payload["query"]["p"], payload["query"]["q"])
    mu = s.noisy_response(human, query, tset, rng)
    answer = client.post(f"/sessions/{session_id}/feedback", json={"mu": mu}).json()
    print(f"  round {answer['iteration']:2d}: {query.p_id} vs {query.q_id} -> {mu:+.1f}")

estimate = client.get(f"/sessions/{session_id}/estimate").json()
print("\nestimate:", np.round(estimate["w_hat"], 3),
      "alpha:", round(estimate["alpha_hat"], 3))
print("best trajectory:", estimate["best_trajectory"]["id"])

replayed = replay_session_log(data_dir / "sessions" / f"{session_id}.jsonl",
                              {"demo": tset})
offline = s.mean_weight(replayed.belief)
print("offline replay matches:",
      bool(np.allclose(offline.w_hat, estimate["w_hat"], atol=1e-12)))
