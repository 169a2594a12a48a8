"""Active query selection: information gain and max regret vs random picks.

Scores a few candidate queries under a live belief, then runs three short
elicitation sessions with the same hidden user to compare policies.
"""

import numpy as np

import scalefb as s

rng = np.random.default_rng(11)
tset = s.synthetic_env(4, 60, rng)
hidden = s.SimulatedUser(weights=s.random_unit_vector(4, rng),
                         saturation=0.5, sigma=0.1, epsilon=0.1)

records = [s.respond(hidden, s.random_query(tset, rng), tset, rng) for _ in range(3)]
belief = s.sample_posterior(tset, records, 0.1, 500, np.random.default_rng(1))

print("information-gain scores (bits) of five random candidates:")
for _ in range(5):
    query = s.random_query(tset, rng)
    print(f"  {query.p_id} vs {query.q_id}: "
          f"{s.info_gain_score(query, belief, 0.1):.3f}")

policy = s.QueryPolicy(kind="info_gain", candidate_budget=500)
chosen = s.select_info_gain(belief, tset, policy, np.random.default_rng(2))
print(f"selected by info gain:  {chosen.p_id} vs {chosen.q_id} -> "
      f"{s.info_gain_score(chosen, belief, 0.1):.3f} bits")

regret_policy = s.QueryPolicy(kind="max_regret", candidate_budget=500)
chosen = s.select_max_regret(belief, tset, regret_policy, np.random.default_rng(2))
print(f"selected by max regret: {chosen.p_id} vs {chosen.q_id}")

print("\nalignment after 15 queries, same hidden user:")
for kind in ("info_gain", "max_regret", "random"):
    result = s.run_session(hidden, tset, s.QueryPolicy(kind=kind, candidate_budget=500),
                           "scale", 15, 0.1, 100, seed=5)
    print(f"  {kind:11s} {result.metrics['alignment'][-1]:.3f}")
