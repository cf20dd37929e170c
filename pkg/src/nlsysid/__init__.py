"""Estimation and uncertainty quantification for linearly parameterized
nonlinear systems x_{t+1} = theta . phi(x_t, u_t) + w_t."""

from .bmsb import BmsbEstimate, estimate_bmsb, mc_smallball_prob
from .bounds import (
    BoundInputs,
    lse_burn_in,
    lse_error_bound,
    sme_constants,
    sme_diameter_bound,
    sme_failure_prob,
    sme_m_choice,
)
from .experiments import (
    ExperimentConfig,
    SweepResult,
    canned_config,
    default_t_grid,
    fit_loglog_slope,
    run_sweep,
)
from .geometry import HPolytope, LpResult, contains, diameter, lp_maximize, prune, vertices_2d
from .lse import LseResult, estimation_error, solve_lse
from .models import (
    ControlPolicy,
    Dimensions,
    FeatureMap,
    ParameterMatrix,
    SystemModel,
    Trajectory,
    build_model,
    eval_features,
    linear_scalar_model,
    open_loop_policy,
    pendulum_model,
    pendulum_policy,
    quadrotor_model,
    quadrotor_policy,
    simulate,
    step,
)
from .noise import (
    NoiseSpec,
    SeedStream,
    component_std,
    sample,
    sample_many,
    sample_truncated_gaussian_scalar,
    tightness_coefficient,
)
from .sme import (
    SmeState,
    sme_absorb_trajectory,
    sme_contains_truth,
    sme_diameter,
    sme_init,
    sme_project_2d,
    sme_update,
)

__version__ = "0.1.0"
