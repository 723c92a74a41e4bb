"""Dense numerical kernels shared across the package.

Column standardization, un-normalized covariance, symmetric
eigendecomposition with a deterministic ordering and sign convention,
and a ridge-guarded solver for symmetric positive definite systems.
Everything here is a thin, validated layer over numpy.linalg.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, SingularMatrixError

#: relative asymmetry tolerated by sym_eig before it refuses the input
SYMMETRY_TOL = 1e-10

#: condition number beyond which solve_spd declares the system singular
CONDITION_LIMIT = 1e14


def as_matrix(X, name: str = "X") -> np.ndarray:
    """Validate and return ``X`` as a finite 2-D float64 array."""
    A = np.asarray(X, dtype=np.float64)
    if A.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got ndim={A.ndim}")
    if A.shape[0] == 0 or A.shape[1] == 0:
        raise InvalidInputError(f"{name} must be non-empty, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return A


def as_vector(v, name: str = "v") -> np.ndarray:
    """Validate and return ``v`` as a finite 1-D float64 array."""
    a = np.asarray(v, dtype=np.float64)
    if a.ndim != 1:
        raise InvalidInputError(f"{name} must be 1-D, got ndim={a.ndim}")
    if a.shape[0] == 0:
        raise InvalidInputError(f"{name} must be non-empty")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return a


@dataclass(frozen=True)
class StandardizationParams:
    """Per-column centering and scaling learned from a training matrix.

    ``stds`` holds sample standard deviations (divisor ``n - 1``).
    Columns whose std is zero are recorded as zero here and mapped to
    zero by :meth:`apply`, so constant columns never produce NaN.
    """

    means: np.ndarray
    stds: np.ndarray

    def apply(self, X) -> np.ndarray:
        """Standardize new rows with the stored parameters."""
        A = as_matrix(X)
        if A.shape[1] != self.means.shape[0]:
            raise InvalidInputError(
                f"expected {self.means.shape[0]} columns, got {A.shape[1]}"
            )
        safe = np.where(self.stds > 0.0, self.stds, 1.0)
        out = (A - self.means) / safe
        if np.any(self.stds == 0.0):
            out[:, self.stds == 0.0] = 0.0
        return out


def standardize(X) -> tuple[np.ndarray, StandardizationParams]:
    """Center each column and scale it by its sample standard deviation.

    Returns the standardized matrix and the parameters needed to apply
    the same transform to held-out rows.  Requires at least two rows so
    the n-1 divisor is defined.
    """
    A = as_matrix(X)
    if A.shape[0] < 2:
        raise InvalidInputError("standardize needs at least 2 rows")
    means = A.mean(axis=0)
    stds = A.std(axis=0, ddof=1)
    # an exactly constant column can still report a std of ~1e-16 when
    # its mean does not round-trip in floating point; pin those to zero
    # so apply() maps them to zero instead of mean round-off noise
    constant = A.max(axis=0) == A.min(axis=0)
    if np.any(constant):
        stds = np.where(constant, 0.0, stds)
        means = np.where(constant, A[0], means)
    params = StandardizationParams(means=means, stds=stds)
    return params.apply(A), params


def covariance_matrix(X) -> np.ndarray:
    """Return ``X.T @ X`` for an already centered or standardized matrix.

    No 1/(n-1) factor is applied; eigenvalue *ratios*, which drive
    component retention, are unaffected by the overall scale.
    """
    A = as_matrix(X)
    return A.T @ A


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in descending order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _fix_column_signs(V: np.ndarray) -> np.ndarray:
    # Flip each column so its largest-magnitude entry is positive; on a
    # magnitude tie the lowest row index decides (argmax takes the first).
    idx = np.argmax(np.abs(V), axis=0)
    pivots = V[idx, np.arange(V.shape[1])]
    signs = np.where(pivots < 0.0, -1.0, 1.0)
    return V * signs


def sym_eig(S) -> EigenSystem:
    """Eigendecompose a symmetric matrix with deterministic conventions.

    The input must be symmetric to within a small relative tolerance; it
    is then symmetrized exactly by averaging with its transpose before
    the decomposition, so the result is identical for inputs that differ
    only by floating-point asymmetry.  Eigenvalues come back sorted
    descending (stable sort, so equal eigenvalues keep LAPACK's relative
    order) and each eigenvector is sign-fixed as in
    :func:`_fix_column_signs`.
    """
    A = as_matrix(S, "S")
    if A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"sym_eig needs a square matrix, got {A.shape}")
    scale = max(1.0, float(np.abs(A).max()))
    asym = float(np.abs(A - A.T).max())
    if asym > SYMMETRY_TOL * scale:
        raise InvalidInputError(
            f"matrix is not symmetric: max asymmetry {asym:.3e} "
            f"exceeds {SYMMETRY_TOL:.0e} * {scale:.3e}"
        )
    A = 0.5 * (A + A.T)
    w, V = np.linalg.eigh(A)
    order = np.argsort(-w, kind="stable")
    return EigenSystem(
        eigenvalues=w[order], eigenvectors=_fix_column_signs(V[:, order])
    )


def solve_spd(S, b, ridge: float = 0.0) -> np.ndarray:
    """Solve ``(S + ridge*I) x = b`` for symmetric positive (semi)definite S.

    ``ridge`` must be non-negative.  If the regularized system is still
    numerically singular (condition number above CONDITION_LIMIT, or not
    finite) a SingularMatrixError is raised instead of returning junk.
    """
    A = as_matrix(S, "S")
    if A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"solve_spd needs a square matrix, got {A.shape}")
    rhs = as_vector(b, "b")
    if rhs.shape[0] != A.shape[0]:
        raise InvalidInputError(
            f"b has length {rhs.shape[0]}, expected {A.shape[0]}"
        )
    if ridge < 0.0:
        raise InvalidInputError("ridge must be non-negative")
    reg = A + ridge * np.eye(A.shape[0])
    cond = np.linalg.cond(reg)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularMatrixError(
            f"system is numerically singular (cond={cond:.3e})"
        )
    return np.linalg.solve(reg, rhs)


def retention_count(eigenvalues, retain) -> int:
    """How many leading eigen-directions to keep.

    ``retain`` is either an integer >= 1 (kept as-is, capped at the
    spectrum length) or a fraction in (0, 1): the smallest m whose
    cumulative share of the total (negatives clipped to zero) reaches
    the fraction.
    """
    lam = as_vector(eigenvalues, "eigenvalues")
    r = float(retain)
    if r <= 0.0:
        raise InvalidInputError("retain must be positive")
    if r >= 1.0:
        if r != int(r):
            raise InvalidInputError(
                "retain >= 1 must be a whole number of components"
            )
        return min(int(r), lam.shape[0])
    clipped = np.clip(lam, 0.0, None)
    total = clipped.sum()
    if total <= 0.0:
        raise InvalidInputError("cannot apply a contribution threshold to an all-zero spectrum")
    cum = np.cumsum(clipped) / total
    return int(np.argmax(cum >= r)) + 1
