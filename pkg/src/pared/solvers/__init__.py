"""Penalized model fitters scored by the search loop."""

from .regression import (
    ElasticNetParams,
    FittedRegression,
    FusedLassoParams,
    RegressionDataset,
    fit_elastic_net,
    fit_fused_lasso,
    lambda_anchor_enet,
    lambda_anchor_flasso_fusion,
    prepare_regression,
)
from .graphical import (
    JGLParams,
    MultiGroupDataset,
    PrecisionEstimates,
    fit_jgl,
    fused_difference_prox,
    lambda1_anchor_jgl,
    multigroup_from_matrices,
)

__all__ = [
    "ElasticNetParams",
    "FittedRegression",
    "FusedLassoParams",
    "JGLParams",
    "MultiGroupDataset",
    "PrecisionEstimates",
    "RegressionDataset",
    "fit_elastic_net",
    "fit_fused_lasso",
    "fit_jgl",
    "fused_difference_prox",
    "lambda1_anchor_jgl",
    "lambda_anchor_enet",
    "lambda_anchor_flasso_fusion",
    "multigroup_from_matrices",
    "prepare_regression",
]
