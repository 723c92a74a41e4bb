"""Fisher discriminant direction for two classes, plus a PLS-LDA pipeline.

The discriminant solves (S_w + ridge*I) d = m_hi - m_lo where S_w is
the pooled within-class scatter.  The ridge kicks in only when S_w is
badly conditioned, which happens routinely when LDA runs on more
features than samples, and is scaled to the problem via the trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg import as_matrix, as_vector, solve_spd
from .pls import PlsModel, fit_pls, project_scores, score_directions

#: condition number of S_w beyond which the ridge is applied
RIDGE_CONDITION_LIMIT = 1e10

#: ridge = RIDGE_SCALE * trace(S_w) / n_features when triggered
RIDGE_SCALE = 1e-6


@dataclass(frozen=True)
class LdaModel:
    direction: np.ndarray
    x_center: np.ndarray
    ridge: float


def _class_split(X, y):
    labels = np.unique(y)
    if labels.shape[0] != 2:
        raise InvalidInputError(
            f"need exactly 2 classes, got {labels.shape[0]}"
        )
    groups = [X[y == c] for c in labels]
    for c, g in zip(labels, groups):
        if g.shape[0] < 2:
            raise InvalidInputError(
                f"class {c} has {g.shape[0]} samples, need at least 2"
            )
    return labels, groups


def fit_lda(X, y) -> LdaModel:
    """Fit the two-class Fisher discriminant on raw (uncentered) features."""
    X = as_matrix(X)
    y = as_vector(y, "y")
    if y.shape[0] != X.shape[0]:
        raise InvalidInputError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    _, (lo, hi) = _class_split(X, y)

    k = X.shape[1]
    scatter = np.zeros((k, k))
    for g in (lo, hi):
        centered = g - g.mean(axis=0)
        scatter += centered.T @ centered

    delta = hi.mean(axis=0) - lo.mean(axis=0)
    cond = np.linalg.cond(scatter)
    ridge = 0.0
    if not np.isfinite(cond) or cond >= RIDGE_CONDITION_LIMIT:
        ridge = RIDGE_SCALE * float(np.trace(scatter)) / k
    d = solve_spd(scatter, delta, ridge=ridge)
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        raise InvalidInputError("class means coincide; no discriminant direction")
    return LdaModel(direction=d / norm, x_center=X.mean(axis=0), ridge=ridge)


def lda_project(model: LdaModel, X) -> np.ndarray:
    """1-D discriminant scores for new rows, shape (n, 1)."""
    return project_scores(model.direction[:, None], X, model.x_center)


def fit_pls_lda(X, y, n_components: int) -> tuple[PlsModel, LdaModel]:
    """PLS score compression followed by LDA in the score space."""
    pls = fit_pls(X, y, n_components)
    T = project_scores(score_directions(pls), X, pls.x_center)
    lda = fit_lda(T, y)
    return pls, lda


def pls_lda_direction(pls: PlsModel, lda: LdaModel) -> np.ndarray:
    """The composed pipeline collapsed to one direction in feature space."""
    return score_directions(pls) @ lda.direction


def pls_lda_project(pls: PlsModel, lda: LdaModel, X) -> np.ndarray:
    """Project new rows through PLS scores into the LDA direction, (n, 1)."""
    T = project_scores(score_directions(pls), X, pls.x_center)
    return lda_project(lda, T)
