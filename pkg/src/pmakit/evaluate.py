"""Classification on projected scores and model-order selection.

A tiny Gaussian naive Bayes classifier turns 1-D (or low-D) projections
into class decisions, and a stratified k-fold cross-validation picks
the PLS latent-component count by held-out accuracy of exactly that
projection-then-classify pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .pls import coefficient_for, fit_pls

#: per-dimension variance floor: max(REL * global variance, ABS)
VARIANCE_FLOOR_REL = 1e-9
VARIANCE_FLOOR_ABS = 1e-12


def _as_scores(scores) -> np.ndarray:
    s = np.asarray(scores, dtype=np.float64)
    if s.ndim == 1:
        s = s[:, None]
    if s.ndim != 2 or s.shape[0] == 0 or s.shape[1] == 0:
        raise InvalidInputError(f"scores must be (n, d), got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise InvalidInputError("scores contain non-finite entries")
    return s


@dataclass(frozen=True)
class GnbModel:
    """Per-class independent Gaussians with class priors.

    ``class_labels`` is sorted ascending; prediction ties break toward
    the first entry, i.e. the lower label.
    """

    class_labels: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    priors: np.ndarray


def fit_gnb(scores, labels, pooled: bool = False) -> GnbModel:
    """Fit Gaussian naive Bayes on score rows.

    Per class and per dimension a maximum-likelihood Gaussian is fit
    (biased variance).  Variances are floored at a small fraction of the
    global per-dimension variance so a constant dimension cannot produce
    a zero-width density.  With ``pooled=True`` both classes share one
    pooled variance per dimension.
    """
    s = _as_scores(scores)
    y = np.asarray(labels, dtype=np.float64)
    if y.ndim != 1 or y.shape[0] != s.shape[0]:
        raise InvalidInputError(
            f"labels must be ({s.shape[0]},), got shape {y.shape}"
        )
    classes = np.unique(y)
    if classes.shape[0] != 2:
        raise InvalidInputError(f"need exactly 2 classes, got {classes.shape[0]}")

    n = s.shape[0]
    floor = np.maximum(VARIANCE_FLOOR_REL * s.var(axis=0), VARIANCE_FLOOR_ABS)
    means = np.empty((2, s.shape[1]))
    variances = np.empty((2, s.shape[1]))
    priors = np.empty(2)
    for i, c in enumerate(classes):
        g = s[y == c]
        means[i] = g.mean(axis=0)
        variances[i] = g.var(axis=0)
        priors[i] = g.shape[0] / n
    if pooled:
        counts = np.array([(y == c).sum() for c in classes], dtype=np.float64)
        pooled_var = (counts[:, None] * variances).sum(axis=0) / n
        variances[0] = pooled_var
        variances[1] = pooled_var
    variances = np.maximum(variances, floor)
    return GnbModel(
        class_labels=classes, means=means, variances=variances, priors=priors
    )


def _log_joint(model: GnbModel, s: np.ndarray) -> np.ndarray:
    # log prior + sum of per-dimension Gaussian log densities, (n, 2)
    out = np.empty((s.shape[0], 2))
    for i in range(2):
        diff = s - model.means[i]
        var = model.variances[i]
        ll = -0.5 * (np.log(2.0 * np.pi * var) + diff * diff / var).sum(axis=1)
        out[:, i] = np.log(model.priors[i]) + ll
    return out


def gnb_predict(model: GnbModel, scores) -> np.ndarray:
    """Predicted class labels; posterior ties go to the lower label."""
    s = _as_scores(scores)
    if s.shape[1] != model.means.shape[1]:
        raise InvalidInputError(
            f"scores have {s.shape[1]} dims, model expects {model.means.shape[1]}"
        )
    lj = _log_joint(model, s)
    return model.class_labels[np.argmax(lj, axis=1)]


def gnb_evaluate(model: GnbModel, scores, labels) -> float:
    """Fraction of rows whose predicted label matches."""
    y = np.asarray(labels, dtype=np.float64)
    pred = gnb_predict(model, scores)
    if y.shape != pred.shape:
        raise InvalidInputError(
            f"labels must have shape {pred.shape}, got {y.shape}"
        )
    return float(np.mean(pred == y))


def stratified_folds(labels, n_folds: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Partition indices into folds with near-equal class mix.

    Each class's indices are shuffled and dealt round-robin, so fold
    class counts differ by at most one.
    """
    y = np.asarray(labels)
    if y.ndim != 1:
        raise InvalidInputError("labels must be 1-D")
    if n_folds < 2:
        raise InvalidInputError("need at least 2 folds")
    if y.shape[0] < n_folds:
        raise InvalidInputError(
            f"cannot make {n_folds} folds from {y.shape[0]} samples"
        )
    folds: list[list[np.ndarray]] = [[] for _ in range(n_folds)]
    for c in np.unique(y):
        idx = rng.permutation(np.flatnonzero(y == c))
        for f in range(n_folds):
            folds[f].append(idx[f::n_folds])
    return [np.sort(np.concatenate(parts)) for parts in folds]


def _folds_usable(y: np.ndarray, folds: list[np.ndarray]) -> bool:
    classes = np.unique(y)
    n = y.shape[0]
    for held in folds:
        if held.shape[0] == 0:
            return False
        mask = np.ones(n, dtype=bool)
        mask[held] = False
        train = y[mask]
        for c in classes:
            # both classes must appear on the training side, with at
            # least one sample held out overall
            if not np.any(train == c):
                return False
    return True


def select_latent_count(
    X,
    y,
    grid,
    n_folds: int = 10,
    seed: int = 0,
) -> int:
    """Pick the PLS component count by stratified cross-validation.

    For every fold, one PLS model is fit at the largest candidate and
    truncated to each smaller candidate (components are nested, so this
    equals refitting).  Scores are the 1-D projection onto the
    coefficient vector; a Gaussian naive Bayes fit on the training side
    scores the held-out fold.  The candidate with the best mean accuracy
    wins; ties go to the smallest count.

    If the shuffled folds leave some training side without both classes,
    the fold assignment is redrawn once; a second failure raises.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    candidates = sorted(set(int(a) for a in grid))
    if not candidates or candidates[0] < 1:
        raise InvalidInputError("grid must contain positive integers")
    n, k = X.shape

    folds = None
    for attempt in range(2):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(attempt,)))
        trial = stratified_folds(y, n_folds, rng)
        if _folds_usable(y, trial):
            folds = trial
            break
    if folds is None:
        raise InvalidInputError(
            "cross-validation folds leave a training side without both classes"
        )

    sums = {a: 0.0 for a in candidates}
    for held in folds:
        mask = np.ones(n, dtype=bool)
        mask[held] = False
        X_tr, y_tr = X[mask], y[mask]
        X_te, y_te = X[held], y[held]
        a_cap = min(candidates[-1], k, X_tr.shape[0] - 1)
        model = fit_pls(X_tr, y_tr, a_cap)
        for a in candidates:
            beta = coefficient_for(model, min(a, model.n_components))
            s_tr = (X_tr - model.x_center) @ beta
            s_te = (X_te - model.x_center) @ beta
            gnb = fit_gnb(s_tr, y_tr)
            sums[a] += gnb_evaluate(gnb, s_te, y_te)

    best_a = candidates[0]
    best_acc = -1.0
    for a in candidates:
        acc = sums[a] / len(folds)
        if acc > best_acc:
            best_acc = acc
            best_a = a
    return best_a


def default_latent_grid(n_train: int, n_features: int, n_folds: int = 10) -> list[int]:
    """Candidate component counts that every CV fold can support."""
    fold_train = n_train - int(np.ceil(n_train / n_folds))
    cap = min(n_features, 20, fold_train - 1)
    if cap < 1:
        raise InvalidInputError(
            f"too few samples ({n_train}) for {n_folds}-fold selection"
        )
    return list(range(1, cap + 1))
