"""Correlation-filter visual tracking with sparsity-robust loss functions.

The engine learns a kernelized correlation filter in the frequency
domain by alternating a closed-form dual solve with a loss-specific
residual update (squared baseline, absolute, elastic-net, or group
shrinkage).  A benchmark harness scores sequences with precision /
success curves, peak-value sensitivity, and salt-and-pepper noise
trials.
"""

from .errors import (
    DivergenceError,
    IngestionError,
    InvalidInputError,
    NumericError,
    SequenceError,
    SingularityError,
    TrackerError,
    UndefinedSensitivityError,
)
from .features import (
    BoundingBox,
    FeatureMap,
    apply_window,
    compute_features,
    extract_patch,
    read_image,
)
from .harness import (
    EvalReport,
    SequenceSpec,
    auc,
    cle,
    corrupt_pixels,
    load_sequence,
    overlap_ratio,
    precision_curve,
    run_eval,
    sensitivity,
    success_curve,
    write_report_files,
)
from .kernel import KernelCorrelation, explicit_kernel_matrix, gaussian_correlation
from .learner import (
    LearnerParams,
    TrainResult,
    dump_diagnostics,
    objective,
    solve_filter,
    train,
)
from .losses import (
    LossKind,
    penalty,
    prox_elastic_net,
    prox_group_sparse,
    prox_l1,
    soft_threshold,
    update_residual,
)
from .spectral import cosine_window, dft2, gaussian_labels, idft2
from .tracker import (
    TrackerParams,
    TrackerState,
    TrackRecord,
    detect,
    filter_peak,
    init_tracker,
    response_map,
    track_sequence,
    update_model,
)

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "DivergenceError",
    "EvalReport",
    "FeatureMap",
    "IngestionError",
    "InvalidInputError",
    "KernelCorrelation",
    "LearnerParams",
    "LossKind",
    "NumericError",
    "SequenceError",
    "SequenceSpec",
    "SingularityError",
    "TrackRecord",
    "TrackerError",
    "TrackerParams",
    "TrackerState",
    "TrainResult",
    "UndefinedSensitivityError",
    "apply_window",
    "auc",
    "cle",
    "compute_features",
    "corrupt_pixels",
    "cosine_window",
    "detect",
    "dft2",
    "dump_diagnostics",
    "explicit_kernel_matrix",
    "extract_patch",
    "filter_peak",
    "gaussian_correlation",
    "gaussian_labels",
    "idft2",
    "init_tracker",
    "load_sequence",
    "objective",
    "overlap_ratio",
    "penalty",
    "precision_curve",
    "prox_elastic_net",
    "prox_group_sparse",
    "prox_l1",
    "read_image",
    "response_map",
    "run_eval",
    "sensitivity",
    "soft_threshold",
    "solve_filter",
    "success_curve",
    "track_sequence",
    "train",
    "update_model",
    "update_residual",
    "write_report_files",
]
