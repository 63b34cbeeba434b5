"""Linear discriminant analysis with pooled covariance and calibrated posteriors.

Fits on the K-dimensional embedding: per-class means, a single pooled
within-class covariance (denominator m - K), and priors from training
counts. A small ridge, 1e-12 * trace(cov)/d, is always added to the
diagonal before inversion; a matrix that is still not positive-definite
is a hard error, never a silent pseudo-inverse.

The ridge multiplier must stay far below the smallest informative
eigenvalue relative to the trace: embeddings of randomly mixed features
carry a common-variance direction many orders of magnitude above the
discriminative ones, and a larger multiplier erases them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .data import class_counts
from .errors import (
    ClassAbsent,
    DimensionMismatch,
    InvalidParams,
    NotFitted,
    SingularCovariance,
)

RIDGE_SCALE = 1e-12


@dataclass(frozen=True)
class LdaModel:
    """Fitted discriminant parameters on a d-dimensional embedding."""

    means: np.ndarray  # (K, d) class means
    pooled_cov: np.ndarray  # (d, d) pooled covariance, ridge excluded
    priors: np.ndarray  # (K,) training proportions
    ridge: float  # value added to the covariance diagonal

    @property
    def num_classes(self) -> int:
        return self.means.shape[0]

    @property
    def dim(self) -> int:
        return self.means.shape[1]


def _require_fitted(model) -> None:
    if not isinstance(model, LdaModel) or model.means is None:
        raise NotFitted("LDA model is not fitted")


def fit_lda(Z, y, num_classes: int) -> LdaModel:
    """Fit class means, pooled covariance, and priors on training rows.

    Parameters
    ----------
    Z : (m, d) array
        Embedding rows of the training samples.
    y : (m,) array
        Labels in 1..num_classes; every class must be present.
    num_classes : int
        K, fixed externally so fold splits cannot change the model shape.
    """
    Z = np.asarray(Z, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if Z.ndim != 2 or y.ndim != 1 or Z.shape[0] != y.shape[0]:
        raise DimensionMismatch("Z must be (m, d) with one label per row")
    m, d = Z.shape
    k = int(num_classes)
    if m < k + 1:
        raise InvalidParams(
            f"need at least {k + 1} training rows to pool covariance, got {m}"
        )
    counts = class_counts(y, k)
    absent = np.flatnonzero(counts == 0)
    if absent.size:
        raise ClassAbsent(f"class {int(absent[0]) + 1} has no training rows")

    means = np.empty((k, d))
    for c in range(k):
        means[c] = Z[y == c + 1].mean(axis=0)
    centered = Z - means[y - 1]
    pooled = (centered.T @ centered) / (m - k)
    ridge = RIDGE_SCALE * float(np.trace(pooled)) / d
    _factor_cov(pooled, ridge, d)  # fail fast if not PD
    priors = counts / float(m)
    return LdaModel(means=means, pooled_cov=pooled, priors=priors, ridge=ridge)


def _factor_cov(pooled_cov: np.ndarray, ridge: float, d: int):
    cov = pooled_cov + ridge * np.eye(d)
    try:
        return cho_factor(cov, lower=True)
    except np.linalg.LinAlgError:
        raise SingularCovariance(
            "pooled covariance is not positive-definite after ridge "
            f"{ridge:.3e}"
        ) from None


def discriminant_scores(model: LdaModel, Z) -> np.ndarray:
    """Gaussian scores log prior_k - 0.5 * (z - mu_k)' Cov^-1 (z - mu_k)."""
    _require_fitted(model)
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[1] != model.dim:
        raise DimensionMismatch(
            f"expected (n, {model.dim}) embedding, got {Z.shape}"
        )
    factor = _factor_cov(model.pooled_cov, model.ridge, model.dim)
    scores = np.empty((Z.shape[0], model.num_classes))
    log_priors = np.log(model.priors)
    for c in range(model.num_classes):
        diff = Z - model.means[c]
        sol = cho_solve(factor, diff.T)
        scores[:, c] = log_priors[c] - 0.5 * np.sum(diff.T * sol, axis=0)
    return scores


def posterior(model: LdaModel, Z) -> np.ndarray:
    """Row-stochastic posterior matrix via a stabilized softmax of the scores."""
    scores = discriminant_scores(model, Z)
    scores -= scores.max(axis=1, keepdims=True)
    np.exp(scores, out=scores)
    scores /= scores.sum(axis=1, keepdims=True)
    return scores


def predict(model: LdaModel, Z) -> np.ndarray:
    """Most probable class per row; ties go to the smaller class index."""
    return np.argmax(posterior(model, Z), axis=1) + 1
