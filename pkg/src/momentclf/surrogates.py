"""Baseline training criteria: regularized logistic loss, bipartite pairwise
hinge loss, and the closed-form pooled-covariance discriminant."""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateModelError, SingularModelError
from .model import LinearModel
from .moments import ClassMoments
from .objectives import Objective, ObjectiveEval

__all__ = [
    "logistic_eval",
    "logistic_objective",
    "pairwise_hinge_eval",
    "hinge_objective",
    "lda_fit",
]


def _stable_sigmoid(t: np.ndarray) -> np.ndarray:
    # 1/(1+exp(-t)) without overflow in either tail.
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def logistic_eval(w: np.ndarray, dataset, lam: float) -> ObjectiveEval:
    """Mean logistic loss of scores w'x plus lam * ||w||^2, with gradient.

    The per-sample term log(1 + exp(-y_i w'x_i)) is computed as
    logaddexp(0, -y_i w'x_i), which is exact in both tails instead of
    overflowing for strongly misclassified samples.
    """
    lam = float(lam)
    if lam < 0.0 or not math.isfinite(lam):
        raise ValueError(f"lam must be finite and >= 0, got {lam!r}")
    w = np.asarray(w, dtype=float)
    X = dataset.features
    if w.shape != (X.shape[1],):
        raise ValueError(f"w must have shape ({X.shape[1]},), got {w.shape}")
    y = dataset.labels.astype(float)
    n = X.shape[0]
    t = -y * (X @ w)
    value = float(np.logaddexp(0.0, t).mean() + lam * (w @ w))
    coef = _stable_sigmoid(t) * (-y) / n
    gradient = X.T @ coef + 2.0 * lam * w
    return ObjectiveEval(value=value, gradient=gradient)


def logistic_objective(dataset, lam: float) -> Objective:
    """Bind the logistic criterion to a dataset for the optimizer."""

    def evaluate(w: np.ndarray) -> ObjectiveEval:
        return logistic_eval(w, dataset, lam)

    return evaluate


def _hinge_score_eval(sp: np.ndarray, sn: np.ndarray):
    """Value and unnormalized per-score pair counts of the bipartite hinge.

    For positive scores sp and negative scores sn, computes the mean over
    all pairs of max(0, 1 - (sp_i - sn_j)) in O(n log n) via sorting,
    prefix sums, and per-score active-pair counts.  Returns
    (value, order_pos, signed_pos, order_neg, active_pos): the count array
    entries belong to the scores picked out by the matching order array,
    and the caller divides the assembled gradient by the pair count once.
    """
    n_pos = sp.shape[0]
    n_neg = sn.shape[0]
    n_pairs = n_pos * n_neg
    order_pos = np.argsort(sp)
    order_neg = np.argsort(sn)
    sp_sorted = sp[order_pos]
    thresholds = sn[order_neg]
    thresholds += 1.0
    # pair (i, j) is active iff sp_i < sn_j + 1; both count directions
    # compare against the one shifted array, and the queries are sorted so
    # successive binary searches stay cache-local (random-order queries
    # are what pushes the large-n wall time off the n log n curve)
    active_pos = np.searchsorted(sp_sorted, thresholds, side="left")
    prefix = np.empty(n_pos + 1)
    prefix[0] = 0.0
    np.cumsum(sp_sorted, out=prefix[1:])
    value = float(
        (np.einsum("i,i->", active_pos, thresholds) - prefix[active_pos].sum())
        / n_pairs
    )
    # the reverse-direction counts are the staircase inverse of active_pos:
    # t_k <= sp at sorted rank r exactly when active_pos[k] <= r, so a
    # cumulative histogram of active_pos gives them without a second search
    covered = np.cumsum(np.bincount(active_pos, minlength=n_pos + 1))
    signed_pos = covered[:n_pos]
    signed_pos -= n_neg
    return value, order_pos, signed_pos, order_neg, active_pos


def pairwise_hinge_eval(w: np.ndarray, dataset, printed_orientation: bool = False) -> ObjectiveEval:
    """Pairwise ranking hinge: mean over positive-negative pairs of
    max(0, 1 - (w'x_pos - w'x_neg)), with its (sub)gradient.

    This orientation penalizes a positive that fails to outscore a negative
    by the unit margin, so minimizing it pushes AUC up.  Setting
    `printed_orientation=True` evaluates the sign-flipped variant
    max(0, 1 - (w'x_neg - w'x_pos)) instead; it exists for auditing the
    difference and is not useful for training.
    """
    w = np.asarray(w, dtype=float)
    X = dataset.features
    if w.shape != (X.shape[1],):
        raise ValueError(f"w must have shape ({X.shape[1]},), got {w.shape}")
    pos = dataset.pos_index
    neg = dataset.neg_index
    if pos.shape[0] == 0 or neg.shape[0] == 0:
        raise ValueError("pairwise hinge needs at least one sample of each class")
    # score the whole matrix once and split the score vector; copying the
    # class submatrices would move 8*n*d bytes per call
    scores = X @ w
    sp = scores[pos]
    sn = scores[neg]
    if printed_orientation:
        value, order_pos, count_pos, order_neg, count_neg = _hinge_score_eval(-sp, -sn)
        scale = -float(pos.shape[0] * neg.shape[0])
    else:
        value, order_pos, count_pos, order_neg, count_neg = _hinge_score_eval(sp, sn)
        scale = float(pos.shape[0] * neg.shape[0])
    # scatter the sorted-rank counts straight to their dataset rows through
    # the composed permutations, then normalize on the d-vector rather
    # than per sample
    g_scores = np.empty_like(scores)
    g_scores[pos[order_pos]] = count_pos
    g_scores[neg[order_neg]] = count_neg
    gradient = X.T @ g_scores
    gradient /= scale
    return ObjectiveEval(value=value, gradient=gradient)


def hinge_objective(dataset, printed_orientation: bool = False) -> Objective:
    """Bind the pairwise hinge to a dataset for the optimizer."""

    def evaluate(w: np.ndarray) -> ObjectiveEval:
        return pairwise_hinge_eval(w, dataset, printed_orientation)

    return evaluate


def lda_fit(moments: ClassMoments) -> LinearModel:
    """Closed-form linear discriminant from a moment model.

    Pools the class covariances with prior weights, solves
    pooled * w = mu_pos - mu_neg, and sets the intercept so the decision
    boundary sits between the class means with a prior-odds shift.  If the
    pooled matrix is not factorizable, a diagonal jitter of
    1e-8 * trace/d is tried once before giving up.
    """
    diff = moments.mu_pos - moments.mu_neg
    if float(np.linalg.norm(diff)) < 1e-12:
        raise DegenerateModelError("class means coincide; the discriminant direction is zero")
    pooled = moments.prior_pos * moments.sigma_pos + moments.prior_neg * moments.sigma_neg
    d = moments.dim
    jitter = 1e-8 * float(np.trace(pooled)) / d
    solve_matrix = None
    for candidate in (pooled, pooled + jitter * np.eye(d)):
        try:
            np.linalg.cholesky(candidate)
        except np.linalg.LinAlgError:
            continue
        solve_matrix = candidate
        break
    if solve_matrix is None:
        raise SingularModelError(
            "pooled covariance is singular even after diagonal jitter"
        )
    w = np.linalg.solve(solve_matrix, diff)
    intercept = float(-0.5 * (w @ (moments.mu_pos + moments.mu_neg))
                      + math.log(moments.prior_pos / moments.prior_neg))
    return LinearModel(w=w, intercept=intercept)
