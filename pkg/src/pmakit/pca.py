"""Principal component analysis on standardized columns."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg import (
    EigenSystem,
    StandardizationParams,
    as_matrix,
    covariance_matrix,
    retention_count,
    standardize,
    sym_eig,
)


@dataclass(frozen=True)
class PcaModel:
    standardization: StandardizationParams
    eig: EigenSystem
    retained: int


def fit_pca(X, retain=0.95) -> PcaModel:
    """Fit PCA: standardize columns, eigendecompose X.T @ X, keep components.

    ``retain`` is a cumulative contribution fraction in (0, 1) or a fixed
    integer count of components.
    """
    A = as_matrix(X)
    if A.shape[0] < 2:
        raise InvalidInputError("fit_pca needs at least 2 rows")
    Z, params = standardize(A)
    eig = sym_eig(covariance_matrix(Z))
    m = retention_count(eig.eigenvalues, retain)
    return PcaModel(standardization=params, eig=eig, retained=m)


def pca_transform(model: PcaModel, X) -> np.ndarray:
    """Map new rows into the retained component space."""
    Z = model.standardization.apply(X)
    return Z @ model.eig.eigenvectors[:, : model.retained]


def explained_ratio(model: PcaModel) -> np.ndarray:
    """Cumulative contribution of the leading eigenvalues."""
    lam = np.clip(model.eig.eigenvalues, 0.0, None)
    total = lam.sum()
    if total <= 0.0:
        return np.zeros_like(lam)
    return np.cumsum(lam) / total
