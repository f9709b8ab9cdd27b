"""Adaptive neuro-fuzzy inference engine for behavioral trust estimation."""

from .baseline import fis_baseline, fis_model
from .membership import BellMF, GaussianMF, MembershipFunction, TriangularMF, make_mf
from .model import (
    AnfisError,
    AnfisModel,
    CoverageError,
    ForwardTrace,
    FuzzyRule,
    batch_forward,
    grid_model,
    load_model,
    save_model,
)
from .training import (
    SingularSystemError,
    TrainingConfig,
    TrainingDivergedError,
    TrainingResult,
    lse_consequents,
    premise_gradient,
    prune_rules,
    rmse,
    train_hybrid,
)

__all__ = [
    "AnfisError",
    "AnfisModel",
    "BellMF",
    "CoverageError",
    "ForwardTrace",
    "FuzzyRule",
    "GaussianMF",
    "MembershipFunction",
    "SingularSystemError",
    "TrainingConfig",
    "TrainingDivergedError",
    "TrainingResult",
    "TriangularMF",
    "batch_forward",
    "fis_baseline",
    "fis_model",
    "grid_model",
    "lse_consequents",
    "load_model",
    "make_mf",
    "premise_gradient",
    "prune_rules",
    "rmse",
    "save_model",
    "train_hybrid",
]
