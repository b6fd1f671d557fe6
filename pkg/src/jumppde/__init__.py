"""Option pricing under finite-activity jump-diffusion models by iterating
diffusion-only free-boundary solves with an FFT-evaluated jump source."""

from ._backend import BACKEND
from .engine import (
    EngineConfig,
    IterationReport,
    PriceResult,
    Surface,
    analytic_iteration_bound,
    backward_sweep,
    discrete_eta,
    discrete_rate_bound,
    extract_free_boundary,
    iterate_to_fixed_point,
)
from .grid import Grid, GridSpec, boundary_values, build_grid, payoff_function, payoff_vector
from .jumpconv import BoundaryExtension, DensityWeights, apply_jump_operator, discretize_density
from .lcp import (
    SchemeCoefficients,
    TridiagonalLCP,
    assemble_coefficients,
    optimal_relaxation,
    solve_lcp_brennan_schwartz,
    solve_lcp_psor,
    solve_linear,
)
from .model import (
    DoubleExponential,
    Gaussian,
    ModelParams,
    OptionSpec,
    boundary_jumps_at_maturity,
    jump_density,
    jump_mean_exp,
    limit_boundary_s_star,
    risk_neutral_drift,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "DoubleExponential",
    "Gaussian",
    "ModelParams",
    "OptionSpec",
    "jump_mean_exp",
    "risk_neutral_drift",
    "boundary_jumps_at_maturity",
    "limit_boundary_s_star",
    "jump_density",
    "GridSpec",
    "Grid",
    "build_grid",
    "payoff_function",
    "payoff_vector",
    "boundary_values",
    "DensityWeights",
    "BoundaryExtension",
    "discretize_density",
    "apply_jump_operator",
    "SchemeCoefficients",
    "TridiagonalLCP",
    "assemble_coefficients",
    "optimal_relaxation",
    "solve_lcp_psor",
    "solve_lcp_brennan_schwartz",
    "solve_linear",
    "EngineConfig",
    "Surface",
    "IterationReport",
    "PriceResult",
    "backward_sweep",
    "iterate_to_fixed_point",
    "analytic_iteration_bound",
    "discrete_eta",
    "discrete_rate_bound",
    "extract_free_boundary",
]
