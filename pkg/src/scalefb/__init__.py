"""Reward learning from slider (scale) feedback with active query selection."""

from .belief import (
    ALPHA_MIN,
    Belief,
    PosteriorEstimate,
    SamplerSettings,
    belief_from_snapshot,
    choice_feasible,
    feedback_likelihood,
    load_records,
    log_posterior,
    mean_weight,
    noiseless_feasible,
    prior_samples,
    query_likelihood,
    sample_posterior,
    save_records,
    validation_log_likelihood,
    worst_case_error,
)
from .environments import EnvironmentSpec, fetch_env, fetch_valid_combinations, synthetic_env
from .errors import (
    DegenerateEnvironmentError,
    DegenerateMeasureError,
    DegeneratePosteriorError,
    InvalidInputError,
    ScaleFeedbackError,
)
from .experiments import (
    DEFAULT_SIGMA_GRID,
    ExperimentConfig,
    MetricCurve,
    SessionResult,
    calibrate_sigma,
    emit_plot_data,
    parse_config,
    run_benchmark,
    run_session,
)
from .queries import (
    QueryPolicy,
    info_gain_score,
    max_regret_score,
    random_query,
    select_info_gain,
    select_max_regret,
    select_query,
)
from .trajectories import (
    Query,
    Trajectory,
    TrajectorySet,
    alignment,
    best_trajectory,
    load_trajectory_set,
    random_unit_vector,
    regret,
    relative_reward,
    reward,
    reward_gap,
    save_trajectory_set,
    unit_vector,
)
from .users import (
    FeedbackRecord,
    SimulatedUser,
    noiseless_response,
    noisy_response,
    respond,
    round_to_grid,
    slider_grid,
)

__version__ = "0.1.0"
