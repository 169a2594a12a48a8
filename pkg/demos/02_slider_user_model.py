"""How simulated users place the slider.

Shows the saturation effect (higher saturation thresholds keep answers
nearer the middle of the bar), the noise + grid pipeline, and the
soft-choice special case at step size 1.
"""

import numpy as np

import scalefb as s

rng = np.random.default_rng(0)
tset = s.synthetic_env(4, 40, rng)
query = s.random_query(tset, rng)
weights = s.random_unit_vector(4, rng)

print(f"query: {query.p_id} vs {query.q_id}\n")
print("saturation  ideal slider position")
for saturation in (0.25, 0.5, 0.75, 1.0):
    user = s.SimulatedUser(weights=weights, saturation=saturation)
    print(f"   {saturation:4.2f}     {s.noiseless_response(user, query, tset):+.3f}")

print("\nnoisy answers on the 0.1 grid (sigma = 0.2):")
user = s.SimulatedUser(weights=weights, saturation=0.5, sigma=0.2, epsilon=0.1)
answers = [s.noisy_response(user, query, tset, rng) for _ in range(8)]
print("  " + "  ".join(f"{a:+.1f}" for a in answers))

print("\nthe same user on a soft-choice interface (step size 1):")
soft = s.SimulatedUser(weights=weights, saturation=0.5, sigma=0.2, epsilon=1.0)
answers = [s.noisy_response(soft, query, tset, rng) for _ in range(8)]
print("  " + "  ".join(f"{a:+.0f}" for a in answers))
print("\ngrid sizes:", len(s.slider_grid(0.1)), "positions at 0.1,",
      len(s.slider_grid(1.0)), "at 1.0")
