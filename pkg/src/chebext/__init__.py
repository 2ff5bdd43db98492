"""Stable Chebyshev continuation of band-limited Fourier data."""

from .bounds import (
    BoundReport,
    HolderBound,
    ReconstructionBound,
    bound_corollary,
    bound_holder_theorem,
    bound_lemma21,
    bound_reconstruction,
    bound_report,
    coeff_bound,
    optimal_order,
    tail_bound,
)
from .chebyshev import (
    AliasingError,
    ChebCoeffs,
    NodeGrid,
    cheb_eval,
    cheb_nodes,
    coeffs_from_node_samples,
    dct_coefficients,
    eval_series,
    eval_series_grid,
    simplex_indices,
)
from .examples import InstabilitySpec, decay_norm, standard_suite, suite_member
from .extrapolate import (
    HypothesisError,
    Plan,
    PriorData,
    continuation_factor,
    extend,
    make_plan,
    reconstruct,
    resample_to_nodes,
    suggest_tau,
    zero_padding_reconstruct,
)
from .fourier_grid import (
    Field,
    GridSpec,
    SpatialField,
    SupportWarning,
    forward_transform,
    inverse_transform,
    l2_norm,
    parseval_residual,
    sobolev_seminorm,
    sup_norm,
)
from .harness import ExperimentConfig, Summary, inject_noise, run_compliance, run_to_directory

__version__ = "0.1.0"
