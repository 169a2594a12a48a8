"""A scaled-down benchmark campaign: scale vs soft-choice feedback.

Runs the paired session matrix on a small synthetic world and prints the
learning curves; the full-size configuration lives in configs/campaign.cfg
and runs through the command line instead.
"""

import scalefb as s
from scalefb.belief import SamplerSettings
from scalefb.experiments import ExperimentConfig, run_benchmark

config = ExperimentConfig(
    environment=s.EnvironmentSpec(kind="synthetic", dimension=6,
                                  n_trajectories=80, seed=4),
    policies=(
        ("scale", s.QueryPolicy(kind="info_gain", candidate_budget=300)),
        ("soft_choice", s.QueryPolicy(kind="info_gain", candidate_budget=300)),
        ("scale", s.QueryPolicy(kind="random")),
        ("soft_choice", s.QueryPolicy(kind="random")),
    ),
    n_users=6, alpha_grid=(0.25, 0.5, 0.75, 1.0),
    sigma_true=0.1, sigma_assumed=0.1, epsilon=0.1,
    rounds=10, posterior_samples=100,
    metrics=("alignment", "relative_reward"),
    seed=13, sampler=SamplerSettings(n_stages=15, mh_moves=4),
    out_dir="demo_results",
)

result = run_benchmark(config)
print("wrote:", ", ".join(str(p) for p in result.files), "\n")

for metric in ("alignment", "relative_reward"):
    print(metric)
    for curve in result.curves:
        if curve.metric != metric:
            continue
        checkpoints = "  ".join(f"{curve.mean[k]:+.2f}" for k in (0, 5, 10))
        print(f"  {curve.policy:24s} k=0/5/10: {checkpoints} (n={curve.n})")
    print()

final_scale = result.sessions["scale-info_gain"]["alignment"][:, -1].mean()
final_soft = result.sessions["soft_choice-info_gain"]["alignment"][:, -1].mean()
print(f"scale vs soft choice under info gain: {final_scale:.3f} vs {final_soft:.3f}")
