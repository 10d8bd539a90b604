"""Binary linear classifiers trained by directly minimizing closed-form
Gaussian-moment expressions for expected prediction error and expected
ranking loss, with surrogate and discriminant baselines and a benchmark
harness."""

from .errors import (
    DegenerateModelError,
    DegenerateProjectionError,
    InsufficientDataError,
    InvalidModelError,
    NoInitializerError,
    ParseError,
    SingularModelError,
)
from .normal import std_normal_cdf, std_normal_pdf
from .moments import (
    SIGMA_EPS,
    AucMoments,
    ClassMoments,
    auc_moments,
    estimate_class_moments,
    projected_stats,
)
from .model import LinearModel, load_model, save_model
from .objectives import (
    RATIO_CLAMP,
    Objective,
    ObjectiveEval,
    auc_objective,
    error_objective,
    f_auc,
    f_error,
    grad_f_auc,
    grad_f_error,
)
from .surrogates import (
    hinge_objective,
    lda_fit,
    logistic_eval,
    logistic_objective,
    pairwise_hinge_eval,
)
from .optimizer import (
    LineSearchConfig,
    OptimizationTrace,
    TraceRecord,
    gd_backtracking,
    init_random,
    init_w0_error,
)
from .metrics import EvalResult, empirical_accuracy, empirical_auc, evaluate_model
from .data import (
    Dataset,
    GaussianSpec,
    NormalizationStats,
    apply_zscore,
    format_libsvm,
    gen_gaussian,
    inject_outliers,
    kfold_split,
    load_libsvm,
    load_moments,
    normalize_zscore,
    parse_libsvm,
    save_libsvm,
    save_moments,
)
from .harness import (
    METHODS,
    MOMENT_SOURCES,
    ExperimentConfig,
    ExperimentReport,
    RunResult,
    emit_report,
    emit_trace,
    run_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateModelError",
    "DegenerateProjectionError",
    "InsufficientDataError",
    "InvalidModelError",
    "NoInitializerError",
    "ParseError",
    "SingularModelError",
    "std_normal_cdf",
    "std_normal_pdf",
    "SIGMA_EPS",
    "AucMoments",
    "ClassMoments",
    "auc_moments",
    "estimate_class_moments",
    "projected_stats",
    "LinearModel",
    "load_model",
    "save_model",
    "RATIO_CLAMP",
    "Objective",
    "ObjectiveEval",
    "auc_objective",
    "error_objective",
    "f_auc",
    "f_error",
    "grad_f_auc",
    "grad_f_error",
    "hinge_objective",
    "lda_fit",
    "logistic_eval",
    "logistic_objective",
    "pairwise_hinge_eval",
    "LineSearchConfig",
    "OptimizationTrace",
    "TraceRecord",
    "gd_backtracking",
    "init_random",
    "init_w0_error",
    "EvalResult",
    "empirical_accuracy",
    "empirical_auc",
    "evaluate_model",
    "Dataset",
    "GaussianSpec",
    "NormalizationStats",
    "apply_zscore",
    "format_libsvm",
    "gen_gaussian",
    "inject_outliers",
    "kfold_split",
    "load_libsvm",
    "load_moments",
    "normalize_zscore",
    "parse_libsvm",
    "save_libsvm",
    "save_moments",
    "METHODS",
    "MOMENT_SOURCES",
    "ExperimentConfig",
    "ExperimentReport",
    "RunResult",
    "emit_report",
    "emit_trace",
    "run_experiment",
    "__version__",
]
