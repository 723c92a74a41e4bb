"""Flat text serialization for fitted models.

One line per field: name, number of dimensions, the dimensions, a
colon, then the values in row-major order.  Scalars use zero for the
dimension count.  Floats are written with repr() so they survive a
round trip bit for bit; lines starting with '#' and blank lines are
ignored.  The first line identifies the format and the model kind::

    pmakit-model v1 pls
    n_components 0 : 3
    weights 2 30 3 : 0.018 ...
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .linalg import EigenSystem, StandardizationParams
from .pca import PcaModel
from .pls import PlsModel
from .ensemble import PmaModel

_MAGIC = "pmakit-model"
_VERSION = "v1"

_PLS_FIELDS = (
    "n_components",
    "weights",
    "x_loadings",
    "y_loadings",
    "inner_coeffs",
    "beta",
    "x_center",
    "y_center",
)
_PCA_FIELDS = ("means", "stds", "eigenvalues", "eigenvectors", "retained")
_PMA_FIELDS = ("fused_eigenvalues", "principal_models", "dim", "x_center")


def _fmt_value(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _field_line(name: str, value) -> str:
    arr = np.asarray(value)
    if arr.ndim == 0:
        return f"{name} 0 : {_fmt_value(arr[()])}"
    dims = " ".join(str(d) for d in arr.shape)
    vals = " ".join(_fmt_value(v) for v in arr.ravel(order="C"))
    return f"{name} {arr.ndim} {dims} : {vals}"


def _write(path, kind: str, fields: dict) -> None:
    lines = [f"{_MAGIC} {_VERSION} {kind}"]
    for name, value in fields.items():
        lines.append(_field_line(name, value))
    Path(path).write_text("\n".join(lines) + "\n")


def _read(path, expected_kind: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InvalidInputError(f"cannot read model file {path}: {e}") from e
    lines = [
        ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")
    ]
    if not lines:
        raise InvalidInputError(f"{path} is empty")
    head = lines[0].split()
    if len(head) != 3 or head[0] != _MAGIC or head[1] != _VERSION:
        raise InvalidInputError(f"{path} is not a {_MAGIC} {_VERSION} file")
    if head[2] != expected_kind:
        raise InvalidInputError(
            f"{path} holds a '{head[2]}' model, expected '{expected_kind}'"
        )
    fields = {}
    for ln in lines[1:]:
        tokens = ln.split()
        try:
            name = tokens[0]
            ndim = int(tokens[1])
            dims = tuple(int(t) for t in tokens[2 : 2 + ndim])
            if tokens[2 + ndim] != ":":
                raise ValueError("missing ':' separator")
            values = [float(t) for t in tokens[3 + ndim :]]
        except (IndexError, ValueError) as e:
            raise InvalidInputError(f"{path}: malformed line {ln[:60]!r}: {e}") from e
        if ndim == 0:
            if len(values) != 1:
                raise InvalidInputError(f"{path}: scalar field '{name}' needs one value")
            fields[name] = values[0]
        else:
            expected = int(np.prod(dims))
            if len(values) != expected:
                raise InvalidInputError(
                    f"{path}: field '{name}' declares shape {dims} "
                    f"({expected} values) but has {len(values)}"
                )
            fields[name] = np.asarray(values, dtype=np.float64).reshape(dims)
    return fields


def _require(fields: dict, names, path) -> None:
    missing = [n for n in names if n not in fields]
    if missing:
        raise InvalidInputError(f"{path} is missing fields: {', '.join(missing)}")


def save_pls(model: PlsModel, path) -> None:
    _write(
        path,
        "pls",
        {
            "n_components": model.n_components,
            "weights": model.weights,
            "x_loadings": model.x_loadings,
            "y_loadings": model.y_loadings,
            "inner_coeffs": model.inner_coeffs,
            "beta": model.beta,
            "x_center": model.x_center,
            "y_center": model.y_center,
        },
    )


def load_pls(path) -> PlsModel:
    f = _read(path, "pls")
    _require(f, _PLS_FIELDS, path)
    return PlsModel(
        n_components=int(f["n_components"]),
        weights=f["weights"],
        x_loadings=f["x_loadings"],
        y_loadings=f["y_loadings"],
        inner_coeffs=f["inner_coeffs"],
        beta=f["beta"],
        x_center=f["x_center"],
        y_center=float(f["y_center"]),
    )


def save_pca(model: PcaModel, path) -> None:
    _write(
        path,
        "pca",
        {
            "means": model.standardization.means,
            "stds": model.standardization.stds,
            "eigenvalues": model.eig.eigenvalues,
            "eigenvectors": model.eig.eigenvectors,
            "retained": model.retained,
        },
    )


def load_pca(path) -> PcaModel:
    f = _read(path, "pca")
    _require(f, _PCA_FIELDS, path)
    return PcaModel(
        standardization=StandardizationParams(means=f["means"], stds=f["stds"]),
        eig=EigenSystem(eigenvalues=f["eigenvalues"], eigenvectors=f["eigenvectors"]),
        retained=int(f["retained"]),
    )


def save_pma(model: PmaModel, path) -> None:
    _write(
        path,
        "pma",
        {
            "fused_eigenvalues": model.fused_spectrum.eigenvalues,
            "principal_models": model.principal_models,
            "dim": model.dim,
            "x_center": model.x_center,
        },
    )


def load_pma(path) -> PmaModel:
    f = _read(path, "pma")
    _require(f, _PMA_FIELDS, path)
    return PmaModel(
        fused_spectrum=EigenSystem(
            eigenvalues=f["fused_eigenvalues"], eigenvectors=f["principal_models"]
        ),
        principal_models=f["principal_models"],
        dim=int(f["dim"]),
        x_center=f["x_center"],
    )
