"""Rewards, regret, and the two performance measures on a tiny menu.

Walks through the core quantities on a hand-sized trajectory set so the
numbers are easy to verify by eye.
"""

import numpy as np

import scalefb as s

tset = s.TrajectorySet(2, [
    s.Trajectory("safe", [0.9, 0.1], label="slow but careful"),
    s.Trajectory("fast", [0.1, 0.9], label="quick and risky"),
    s.Trajectory("mixed", [0.6, 0.6], label="a bit of both"),
])

alice = s.unit_vector([2.0, 1.0])    # cares about safety twice as much
robot_guess = s.unit_vector([1.0, 4.0])

print("rewards under Alice's weights:")
for traj in tset:
    print(f"  {traj.id:6s} {s.reward(traj, alice):+.3f}  ({traj.label})")

print(f"\nAlice's optimum:        {s.best_trajectory(alice, tset).id}")
print(f"robot's optimum:        {s.best_trajectory(robot_guess, tset).id}")
print(f"regret of the guess:    {s.regret(robot_guess, alice, tset):.3f}")
print(f"maximum reward gap:     {s.reward_gap(alice, tset):.3f}")
print(f"alignment:              {s.alignment(robot_guess, alice):.3f}")
print(f"relative reward:        {s.relative_reward(robot_guess, alice, tset):.3f}")

# the reward gap equals max minus min reward, handy for sanity checks
rewards = tset.feature_matrix @ alice
assert np.isclose(s.reward_gap(alice, tset), rewards.max() - rewards.min())
