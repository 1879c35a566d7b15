from .bias import (Decomposition, IsoLinkage, PeeringMode, apply_peering, check_property1,
                   decompose_accuracy, link_test_to_train, majority_label)
from .folds import FoldSplit, kfold
from .harness import EvaluationResult, FoldEvaluation, evaluate, load_predictions
from .kernels import GramMatrix, gram_for, vertex_histogram_kernel, wl_features, wl_kernel
from .svm import DEFAULT_C_GRID, KernelSVC, smo_binary, train_classifier

__all__ = [
    "Decomposition", "IsoLinkage", "PeeringMode", "apply_peering", "check_property1",
    "decompose_accuracy", "link_test_to_train", "majority_label", "FoldSplit", "kfold",
    "EvaluationResult", "FoldEvaluation", "evaluate", "load_predictions", "GramMatrix", "gram_for",
    "vertex_histogram_kernel", "wl_features", "wl_kernel", "DEFAULT_C_GRID", "KernelSVC",
    "smo_binary", "train_classifier",
]
