"""Low-rank sparse subspace clustering solvers and benchmark tooling."""

from .baselines import LrrSolution, convex_lrssc, lrr_noiseless, lrr_noisy
from .datasets import (
    LabeledDataset,
    SyntheticSpec,
    add_gaussian_noise,
    generate_synthetic,
    load_labels,
    load_matrix,
    save_labels,
    save_matrix,
)
from .evaluation import (
    EvalReport,
    GridPoint,
    GridSearchResult,
    GridSpec,
    clustering_error,
    gmc_default_grid,
    grid_search,
    s0l0_default_grid,
)
from .exceptions import DegenerateAffinityError, NumericalError
from .prox import (
    GmcParams,
    ThresholdParams,
    entrywise_firm,
    entrywise_hard,
    firm_threshold,
    gmc_penalty_separable,
    hard_threshold,
    scaled_mc_penalty,
    soft_threshold,
    svt_firm,
    svt_hard,
    svt_soft,
)
from .solvers import (
    KktResiduals,
    S0L0State,
    SolverConfig,
    SolverState,
    SolverTrace,
    dual_update,
    effective_weights,
    gmc_c1_update,
    gmc_c2_update,
    gmc_lrssc_solve,
    j_update,
    kkt_residuals,
    lagrangian_value,
    mu_update,
    normalize_columns,
    s0l0_c_update,
    s0l0_lrssc_solve,
    stopping_check,
)
from .spectral import build_affinity, spectral_cluster

__version__ = "0.1.0"

__all__ = [
    "DegenerateAffinityError",
    "EvalReport",
    "GmcParams",
    "GridPoint",
    "GridSearchResult",
    "GridSpec",
    "KktResiduals",
    "LabeledDataset",
    "LrrSolution",
    "NumericalError",
    "S0L0State",
    "SolverConfig",
    "SolverState",
    "SolverTrace",
    "SyntheticSpec",
    "ThresholdParams",
    "add_gaussian_noise",
    "build_affinity",
    "clustering_error",
    "convex_lrssc",
    "dual_update",
    "effective_weights",
    "entrywise_firm",
    "entrywise_hard",
    "firm_threshold",
    "generate_synthetic",
    "gmc_c1_update",
    "gmc_c2_update",
    "gmc_default_grid",
    "gmc_lrssc_solve",
    "gmc_penalty_separable",
    "grid_search",
    "hard_threshold",
    "j_update",
    "kkt_residuals",
    "lagrangian_value",
    "load_labels",
    "load_matrix",
    "lrr_noiseless",
    "lrr_noisy",
    "mu_update",
    "normalize_columns",
    "s0l0_c_update",
    "s0l0_default_grid",
    "s0l0_lrssc_solve",
    "save_labels",
    "save_matrix",
    "scaled_mc_penalty",
    "soft_threshold",
    "spectral_cluster",
    "stopping_check",
    "svt_firm",
    "svt_hard",
    "svt_soft",
]
