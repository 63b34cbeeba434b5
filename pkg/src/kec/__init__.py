"""Fast multi-kernel encoder classifier.

Kernel-based classification via a label-encoder embedding into K
dimensions plus linear discriminant analysis, with multi-kernel selection
by cross-entropy, a quadratic-cost reference implementation, synthetic
benchmark settings, and a cross-validation/timing harness.
"""

from .data import ClassStats, Dataset, validate
from .encoder import EncoderWeights, build_U, build_weights, embed
from .errors import KecError
from .evaluation import (
    EvalConfig,
    EvalReport,
    ScalingReport,
    bench_scaling,
    cross_validate,
    kfold_split,
)
from .kernels import (
    BUILTIN_KERNELS,
    DEFAULT_KERNELS,
    Kernel,
    distance_induced,
    inner_product,
    kernel_cross,
    kernel_gram,
    resolve_kernel,
    spearman,
)
from .io import load_model, read_csv, save_model, write_csv
from .lda import LdaModel, fit_lda, posterior, predict
from .reference import embed_reference
from .selection import (
    EncoderModel,
    KernelScore,
    cross_entropy,
    fit,
    predict_new,
    select_kernel,
)
from .simgen import SETTINGS, SimSetting, analytic_means, generate

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_KERNELS",
    "ClassStats",
    "DEFAULT_KERNELS",
    "Dataset",
    "EncoderModel",
    "EncoderWeights",
    "EvalConfig",
    "EvalReport",
    "Kernel",
    "KecError",
    "KernelScore",
    "LdaModel",
    "SETTINGS",
    "ScalingReport",
    "SimSetting",
    "analytic_means",
    "bench_scaling",
    "build_U",
    "build_weights",
    "cross_entropy",
    "cross_validate",
    "distance_induced",
    "embed",
    "embed_reference",
    "fit",
    "fit_lda",
    "generate",
    "inner_product",
    "kernel_cross",
    "kernel_gram",
    "kfold_split",
    "load_model",
    "posterior",
    "predict",
    "predict_new",
    "read_csv",
    "resolve_kernel",
    "save_model",
    "select_kernel",
    "spearman",
    "validate",
    "write_csv",
]
