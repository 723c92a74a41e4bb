"""Bootstrapped PLS ensembles: plain coefficient bagging and principal
model analysis.

Both start the same way: N bootstrap resamples of the calibration set,
one PLS model per resample, coefficient vectors collected column-wise.
Bagging averages the columns.  Principal model analysis instead scores
every sub-model on a held-out validation set, keeps the top k, forms
the Gram-style matrix B B^T from the surviving coefficient columns, and
eigendecomposes it; the leading eigenvectors are fused projection
directions that concentrate what the good sub-models agree on.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import DegeneratePoolError, InvalidInputError
from .evaluate import fit_gnb, gnb_evaluate
from .linalg import EigenSystem, as_matrix, retention_count, sym_eig
from .pls import fit_pls

#: how many fresh bootstrap draws to try when a resample is degenerate
#: (single-class, constant response, or no extractable component)
MAX_RESAMPLE_RETRIES = 5


def _stream(seed: int, index: int) -> np.random.Generator:
    # one independent child stream per sub-model, so fitting order (or
    # parallel scheduling) cannot change what each sub-model sees
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def bootstrap_indices(n: int, n_resamples: int, seed: int = 0) -> list[np.ndarray]:
    """The raw bootstrap draws, one index array of length n per resample."""
    if n < 1 or n_resamples < 1:
        raise InvalidInputError("n and n_resamples must be positive")
    return [
        _stream(seed, i).integers(0, n, size=n) for i in range(n_resamples)
    ]


def _fit_one_submodel(X, y, n_components, rng):
    n = X.shape[0]
    last = None
    for _ in range(MAX_RESAMPLE_RETRIES + 1):
        idx = rng.integers(0, n, size=n)
        try:
            return idx, fit_pls(X[idx], y[idx], n_components)
        except InvalidInputError as e:
            last = e
    raise DegeneratePoolError(
        f"bootstrap resample stayed degenerate after "
        f"{MAX_RESAMPLE_RETRIES} retries: {last}"
    )


@dataclass
class SubmodelPool:
    """Coefficient columns of a bootstrapped PLS ensemble.

    ``coefficients`` is (k, N).  ``val_accuracies`` is NaN until
    :func:`score_submodels` fills it.  ``x_center`` is the calibration
    column mean, the single centering every fused projection uses.
    """

    coefficients: np.ndarray
    sample_indices: list[np.ndarray]
    effective_components: np.ndarray
    x_center: np.ndarray
    calibration: Dataset
    val_accuracies: np.ndarray

    @property
    def n_submodels(self) -> int:
        return self.coefficients.shape[1]


def train_submodels(
    calibration: Dataset, n_submodels: int, n_components: int, seed: int = 0
) -> SubmodelPool:
    """Fit ``n_submodels`` PLS models on bootstrap resamples.

    Each sub-model draws from its own random stream derived from
    ``seed`` and its index, so a pool is reproducible sub-model by
    sub-model no matter how the loop is scheduled.  A degenerate draw
    (resample with one class or a constant response) is retried on the
    same stream a few times before giving up.
    """
    if n_submodels < 1:
        raise InvalidInputError("n_submodels must be positive")
    X, y = calibration.X, calibration.y
    cols = []
    indices = []
    effective = np.empty(n_submodels, dtype=np.int64)
    for i in range(n_submodels):
        idx, model = _fit_one_submodel(X, y, n_components, _stream(seed, i))
        cols.append(model.beta)
        indices.append(idx)
        effective[i] = model.n_components
    return SubmodelPool(
        coefficients=np.column_stack(cols),
        sample_indices=indices,
        effective_components=effective,
        x_center=X.mean(axis=0),
        calibration=calibration,
        val_accuracies=np.full(n_submodels, np.nan),
    )


def average_coefficients(coefficients) -> np.ndarray:
    """Column mean taken by explicit in-order accumulation.

    Left fold in fixed column order, so the result is bit-for-bit
    reproducible and independent of any pairwise-summation scheme.
    """
    B = as_matrix(coefficients, "coefficients")
    acc = np.zeros(B.shape[0])
    for j in range(B.shape[1]):
        acc = acc + B[:, j]
    return acc / B.shape[1]


def fit_bagging_pls(X, y, n_submodels: int, n_components: int, seed: int = 0) -> np.ndarray:
    """Bagged PLS coefficient vector: the mean of bootstrap coefficients."""
    if n_submodels < 1:
        raise InvalidInputError("n_submodels must be positive")
    X = as_matrix(X)
    cols = []
    for i in range(n_submodels):
        _, model = _fit_one_submodel(X, np.asarray(y, dtype=np.float64),
                                     n_components, _stream(seed, i))
        cols.append(model.beta)
    return average_coefficients(np.column_stack(cols))


def score_submodels(pool: SubmodelPool, validation: Dataset) -> np.ndarray:
    """Held-out accuracy of each sub-model's 1-D projection.

    For every coefficient column, calibration rows are projected onto
    it, a Gaussian naive Bayes is fit on those scores, and the returned
    entry is that classifier's accuracy on the validation rows.  The
    pool's ``val_accuracies`` is filled in place and also returned.
    """
    if validation.n_features != pool.coefficients.shape[0]:
        raise InvalidInputError(
            "validation feature count does not match the pool"
        )
    classes = np.unique(validation.y)
    if classes.shape[0] != 2:
        raise InvalidInputError("validation set must contain both classes")
    Xc = pool.calibration.X - pool.x_center
    Xv = validation.X - pool.x_center
    acc = np.empty(pool.n_submodels)
    for j in range(pool.n_submodels):
        beta = pool.coefficients[:, j]
        gnb = fit_gnb(Xc @ beta, pool.calibration.y)
        acc[j] = gnb_evaluate(gnb, Xv @ beta, validation.y)
    pool.val_accuracies[:] = acc
    return acc


def select_submodels(pool: SubmodelPool, validation: Dataset, n_keep: int) -> SubmodelPool:
    """Keep the ``n_keep`` sub-models with the best validation accuracy.

    Ties resolve toward the lower sub-model index (stable sort on the
    negated accuracies).  Returns a new pool; the input is untouched
    apart from its accuracy cache.
    """
    if not (1 <= n_keep <= pool.n_submodels):
        raise InvalidInputError(
            f"n_keep must be in [1, {pool.n_submodels}], got {n_keep}"
        )
    acc = score_submodels(pool, validation)
    order = np.argsort(-acc, kind="stable")[:n_keep]
    keep = np.sort(order)
    return SubmodelPool(
        coefficients=pool.coefficients[:, keep],
        sample_indices=[pool.sample_indices[i] for i in keep],
        effective_components=pool.effective_components[keep],
        x_center=pool.x_center,
        calibration=pool.calibration,
        val_accuracies=acc[keep],
    )


@dataclass(frozen=True)
class PmaModel:
    """Fused projection learned from a sub-model pool.

    ``fused_spectrum`` is the full eigensystem of B B^T;
    ``principal_models`` are its leading ``dim`` eigenvector columns,
    the directions new samples are projected onto after centering at
    ``x_center``.
    """

    fused_spectrum: EigenSystem
    principal_models: np.ndarray
    dim: int
    x_center: np.ndarray


def fit_pma(pool: SubmodelPool, dim=1) -> PmaModel:
    """Eigendecompose the coefficient Gram matrix and keep ``dim`` directions.

    ``dim`` is an integer count or a fraction in (0, 1), in which case
    enough directions are kept to cover that share of the eigenvalue
    mass.  An integer ``dim`` larger than the feature count is clamped
    to the numerical rank of B B^T with a warning.
    """
    C = pool.coefficients
    if float(np.abs(C).max()) == 0.0:
        raise DegeneratePoolError("every sub-model coefficient vector is zero")
    B = C @ C.T
    eig = sym_eig(B)
    k = C.shape[0]
    d = float(dim)
    if d >= 1.0 and d == int(d) and int(d) > k:
        lam = eig.eigenvalues
        rank = int(np.sum(lam > lam[0] * 1e-12))
        warnings.warn(
            f"dim={int(d)} exceeds the {k} available directions; "
            f"clamped to rank {rank}",
            stacklevel=2,
        )
        m = rank
    else:
        m = retention_count(eig.eigenvalues, dim)
    return PmaModel(
        fused_spectrum=eig,
        principal_models=eig.eigenvectors[:, :m],
        dim=m,
        x_center=pool.x_center,
    )


def pma_transform(model: PmaModel, X) -> np.ndarray:
    """Project rows onto the fused directions, (n, dim)."""
    A = as_matrix(X)
    k = model.principal_models.shape[0]
    if A.shape[1] != k:
        raise InvalidInputError(f"X has {A.shape[1]} columns, model expects {k}")
    return (A - model.x_center) @ model.principal_models
