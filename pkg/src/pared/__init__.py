"""pared: Pareto-front hyperparameter selection for penalized models.

Instead of collapsing model tuning to a single score, each candidate
(elastic net, fused lasso, or joint graphical lasso) is scored on three
criteria at once and a surrogate-assisted search assembles the set of
non-dominated fits, leaving the final trade-off to the analyst.
"""

__version__ = "0.1.0"

from .design_space import (
    DesignPoint,
    DesignSpace,
    HyperparameterSpec,
    latin_hypercube,
    point_from_unit,
    to_natural,
    to_unit,
)
from .errors import ConfigError, DataError, NumericalError, ParedError
from .moo_engine import (
    BudgetConfig,
    MooResult,
    default_initial_design,
    ehvi,
    make_problem_enet,
    make_problem_flasso,
    make_problem_jgl,
    run_moo,
)
from .objectives import (
    ModelSummary,
    ObjectiveVector,
    enet_objectives,
    flasso_objectives,
    jgl_fused_objectives,
    jgl_group_objectives,
)
from .pareto import (
    EvaluationRecord,
    ParetoArchive,
    compute_reference_point,
    dominates,
    hypervolume,
    non_dominated_filter,
)
from .solvers import (
    ElasticNetParams,
    FittedRegression,
    FusedLassoParams,
    JGLParams,
    MultiGroupDataset,
    PrecisionEstimates,
    RegressionDataset,
    fit_elastic_net,
    fit_fused_lasso,
    fit_jgl,
    lambda1_anchor_jgl,
    lambda_anchor_enet,
    lambda_anchor_flasso_fusion,
    multigroup_from_matrices,
    prepare_regression,
)
from .surrogate import GpSurrogate, KernelParams, fit_gp, log_marginal_likelihood, predict

__all__ = [
    "BudgetConfig",
    "ConfigError",
    "DataError",
    "DesignPoint",
    "DesignSpace",
    "ElasticNetParams",
    "EvaluationRecord",
    "FittedRegression",
    "FusedLassoParams",
    "GpSurrogate",
    "HyperparameterSpec",
    "JGLParams",
    "KernelParams",
    "ModelSummary",
    "MooResult",
    "MultiGroupDataset",
    "NumericalError",
    "ObjectiveVector",
    "ParedError",
    "ParetoArchive",
    "PrecisionEstimates",
    "RegressionDataset",
    "compute_reference_point",
    "default_initial_design",
    "dominates",
    "ehvi",
    "enet_objectives",
    "fit_elastic_net",
    "fit_fused_lasso",
    "fit_gp",
    "fit_jgl",
    "flasso_objectives",
    "hypervolume",
    "jgl_fused_objectives",
    "jgl_group_objectives",
    "lambda1_anchor_jgl",
    "lambda_anchor_enet",
    "lambda_anchor_flasso_fusion",
    "latin_hypercube",
    "log_marginal_likelihood",
    "make_problem_enet",
    "make_problem_flasso",
    "make_problem_jgl",
    "multigroup_from_matrices",
    "non_dominated_filter",
    "point_from_unit",
    "predict",
    "prepare_regression",
    "run_moo",
    "to_natural",
    "to_unit",
]
