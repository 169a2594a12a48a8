"""Posterior over (weights, saturation) from a handful of slider answers.

A planted user answers five random queries; the sampled posterior is
compared against the hidden weights, and the belief is round-tripped
through its JSON snapshot.
"""

import json

import numpy as np

import scalefb as s

rng = np.random.default_rng(3)
tset = s.synthetic_env(3, 40, rng)
hidden = s.SimulatedUser(weights=s.random_unit_vector(3, rng),
                         saturation=0.6, sigma=0.2, epsilon=0.1)

records = [s.respond(hidden, s.random_query(tset, rng), tset, rng) for _ in range(5)]
print("answers:", [f"{r.mu:+.1f}" for r in records])

belief = s.sample_posterior(tset, records, sigma=0.2, m=1000,
                            rng=np.random.default_rng(7))
estimate = s.mean_weight(belief)

print(f"\nhidden weights:     {np.round(hidden.weights, 3)}")
print(f"posterior mean:     {np.round(estimate.w_hat, 3)}")
print(f"alignment:          {s.alignment(estimate.w_hat, hidden.weights):.3f}")
print(f"saturation estimate: {estimate.alpha_hat:.3f} (true {hidden.saturation})")
print(f"worst-case error:   {s.worst_case_error(belief, hidden.weights, 'alignment'):.4f}")

validation = [s.respond(hidden, s.random_query(tset, rng), tset, rng) for _ in range(5)]
print(f"validation log-likelihood: {s.validation_log_likelihood(validation, belief):.3f}")

snapshot = belief.to_snapshot()
restored = s.belief_from_snapshot(json.loads(json.dumps(snapshot)), tset, records)
assert np.allclose(restored.samples_w, belief.samples_w)
print("\nsnapshot round-trip OK,", len(snapshot["samples"]), "samples")
