"""Sparse integer risk scores from binary-labeled tabular data."""

__version__ = "0.1.0"

from .beam import BeamConfig, sparse_beam_lr
from .dataset import (
    BinarizationSpec,
    BinarizationStrategy,
    Dataset,
    FoldPlan,
    binarize,
    load_csv,
    make_folds,
)
from .logreg import (
    INTERCEPT,
    ContinuousModel,
    OptimizerConfig,
    gradient_coordinate,
    lipschitz_coordinate,
    logistic_loss,
    optimize_on_support,
)
from .metrics import auc, calibration_curve, cross_validate, evaluate, predict_risk
from .pipeline import PipelineConfig, PipelineResult, run_pipeline
from .pool import ContinuousPool, PoolConfig, collect_sparse_diverse_pool
from .rounding import (
    IntegerRiskScore,
    RoundingCertificate,
    StarRayConfig,
    auxiliary_loss_round,
    round_pool,
    star_ray_search,
    theorem1_bound,
)
from .scorecard import (
    ScoreCard,
    build_scorecard,
    model_from_json,
    model_to_json,
    reduce_coefficients,
    render_text,
)

__all__ = [
    "BeamConfig",
    "BinarizationSpec",
    "BinarizationStrategy",
    "ContinuousModel",
    "ContinuousPool",
    "Dataset",
    "FoldPlan",
    "INTERCEPT",
    "IntegerRiskScore",
    "OptimizerConfig",
    "PipelineConfig",
    "PipelineResult",
    "PoolConfig",
    "RoundingCertificate",
    "ScoreCard",
    "StarRayConfig",
    "auc",
    "auxiliary_loss_round",
    "binarize",
    "build_scorecard",
    "calibration_curve",
    "collect_sparse_diverse_pool",
    "cross_validate",
    "evaluate",
    "gradient_coordinate",
    "lipschitz_coordinate",
    "load_csv",
    "logistic_loss",
    "make_folds",
    "model_from_json",
    "model_to_json",
    "optimize_on_support",
    "predict_risk",
    "reduce_coefficients",
    "render_text",
    "round_pool",
    "run_pipeline",
    "sparse_beam_lr",
    "star_ray_search",
    "theorem1_bound",
]
