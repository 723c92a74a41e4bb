"""Partial least squares for a single response, fit by NIPALS.

Components are extracted one at a time: the weight vector is the
covariance direction between the current X residual and the current y
residual, scores follow by projection, loadings by regression onto the
scores, and both residuals are deflated before the next round.  For a
scalar response the y-loading of every component is fixed at +1 and the
response's sign information lives entirely in the inner regression
coefficient, which keeps later coefficient assembly free of sign
bookkeeping.

The regression coefficients for the original (centered) inputs are
recovered as ``W (P^T W)^{-1} c`` where column i of W is the i-th weight,
column i of P the i-th x-loading, and c stacks the per-component inner
coefficients times y-loadings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg import as_matrix, as_vector

#: a component whose score energy t.t falls below this times ||Xc||_F**2
#: is considered exhausted and extraction stops early
DEFLATION_TOL = 1e-12


@dataclass(frozen=True)
class PlsModel:
    """Fitted PLS state.

    ``weights``, ``x_loadings`` are (k, a); ``y_loadings`` and
    ``inner_coeffs`` are (a,); ``beta`` is the assembled coefficient
    vector for centered inputs.  ``scores`` and ``x_residual`` are the
    training scores and the X residual left after the last deflation;
    they are None on models restored from disk.
    """

    n_components: int
    weights: np.ndarray
    x_loadings: np.ndarray
    y_loadings: np.ndarray
    inner_coeffs: np.ndarray
    beta: np.ndarray
    x_center: np.ndarray
    y_center: float
    scores: np.ndarray | None = None
    x_residual: np.ndarray | None = None


def fit_pls(X, y, n_components: int) -> PlsModel:
    """Fit a PLS1 model with up to ``n_components`` latent components.

    X is (n, k), y is (n,) and must not be constant.  Extraction stops
    early if the X residual is exhausted before the requested count, so
    ``model.n_components`` can come back smaller than asked.
    """
    X = as_matrix(X)
    y = as_vector(y, "y")
    n, k = X.shape
    if y.shape[0] != n:
        raise InvalidInputError(f"X has {n} rows but y has {y.shape[0]}")
    if n < 2:
        raise InvalidInputError("need at least 2 samples")
    a_max = min(k, n - 1)
    if not (1 <= n_components <= a_max):
        raise InvalidInputError(
            f"n_components must be in [1, {a_max}] for this data, got {n_components}"
        )

    x_center = X.mean(axis=0)
    y_center = float(y.mean())
    E = X - x_center
    F = y - y_center
    if np.abs(F).max() == 0.0:
        raise InvalidInputError("y is constant; nothing to regress on")

    x_energy = float((E * E).sum())
    ws, ps, qs, bs, ts = [], [], [], [], []
    for _ in range(n_components):
        w = E.T @ F
        wnorm = float(np.linalg.norm(w))
        if wnorm == 0.0 or not np.isfinite(wnorm):
            break
        w = w / wnorm
        t = E @ w
        tt = float(t @ t)
        if tt <= DEFLATION_TOL * x_energy:
            break
        p = (E.T @ t) / tt
        # scalar response: loading magnitude folded into the inner
        # coefficient, y-loading pinned to +1
        q = 1.0
        b = float(F @ t) / tt
        E = E - np.outer(t, p)
        F = F - b * t * q
        ws.append(w)
        ps.append(p)
        qs.append(q)
        bs.append(b)
        ts.append(t)

    if not ws:
        raise InvalidInputError("no usable component could be extracted")

    W = np.column_stack(ws)
    P = np.column_stack(ps)
    q_arr = np.asarray(qs, dtype=np.float64)
    b_arr = np.asarray(bs, dtype=np.float64)
    T = np.column_stack(ts)
    beta = _assemble_beta(W, P, b_arr * q_arr)
    return PlsModel(
        n_components=W.shape[1],
        weights=W,
        x_loadings=P,
        y_loadings=q_arr,
        inner_coeffs=b_arr,
        beta=beta,
        x_center=x_center,
        y_center=y_center,
        scores=T,
        x_residual=E,
    )


def _assemble_beta(W: np.ndarray, P: np.ndarray, c: np.ndarray) -> np.ndarray:
    # beta = W (P^T W)^{-1} c; P^T W is small (a x a) and unit upper
    # triangular in exact arithmetic, so a plain solve is safe
    M = P.T @ W
    return W @ np.linalg.solve(M, c)


def coefficients(model: PlsModel) -> np.ndarray:
    """Regression coefficients for centered inputs, using all components."""
    return model.beta


def coefficient_for(model: PlsModel, n_components: int) -> np.ndarray:
    """Coefficients as if only the leading ``n_components`` had been kept.

    NIPALS components are nested: truncating a fitted model to its first
    m components gives exactly the model a fresh fit with m components
    would produce, so this is a cheap way to sweep component counts.
    """
    a = model.n_components
    if not (1 <= n_components <= a):
        raise InvalidInputError(
            f"n_components must be in [1, {a}], got {n_components}"
        )
    if n_components == a:
        return model.beta
    W = model.weights[:, :n_components]
    P = model.x_loadings[:, :n_components]
    c = model.inner_coeffs[:n_components] * model.y_loadings[:n_components]
    return _assemble_beta(W, P, c)


def score_directions(model: PlsModel) -> np.ndarray:
    """Directions R = W (P^T W)^{-1} such that centered X @ R gives scores.

    Unlike the raw weights, these account for deflation, so they apply
    to the original inputs rather than to per-step residuals.
    """
    M = model.x_loadings.T @ model.weights
    return model.weights @ np.linalg.solve(M, np.eye(model.n_components))


def project_scores(directions, X, x_center) -> np.ndarray:
    """Project rows of X onto direction columns after centering."""
    D = as_matrix(directions, "directions")
    A = as_matrix(X)
    c = as_vector(x_center, "x_center")
    if A.shape[1] != D.shape[0] or c.shape[0] != D.shape[0]:
        raise InvalidInputError(
            f"dimension mismatch: X has {A.shape[1]} columns, directions "
            f"expect {D.shape[0]}"
        )
    return (A - c) @ D


def predict(model: PlsModel, X) -> np.ndarray:
    """Predicted responses for new rows."""
    A = as_matrix(X)
    if A.shape[1] != model.beta.shape[0]:
        raise InvalidInputError(
            f"X has {A.shape[1]} columns, model expects {model.beta.shape[0]}"
        )
    return (A - model.x_center) @ model.beta + model.y_center
