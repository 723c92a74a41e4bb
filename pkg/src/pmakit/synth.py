"""Synthetic two-class datasets with latent structure.

Samples live near a low-dimensional latent subspace; the first latent
factor carries the class separation and the rest are nuisance
variation.  Column scales are drawn log-normally so the features look
as unevenly scaled as raw instrument data, which keeps preprocessing
honest.  Also provides writers that round-trip a Dataset through the
CSV-plus-manifest ingestion path.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .data import Dataset, Provenance
from .errors import InvalidInputError


def make_latent_dataset(
    name: str,
    n_samples: int,
    n_features: int,
    n_latent: int | None = None,
    class_sep: float = 3.0,
    noise: float = 0.3,
    pos_fraction: float = 0.5,
    scale_spread: float = 1.0,
    outlier_fraction: float = 0.0,
    outlier_scale: float = 8.0,
    nuisance_scale: float = 1.0,
    label_noise: float = 0.0,
    seed: int = 0,
) -> Dataset:
    """Generate a labeled dataset from a noisy latent-factor model.

    ``class_sep`` is the distance between class means along the first
    latent factor, in units of that factor's standard deviation;
    ``noise`` is the per-feature additive noise level relative to the
    latent signal; ``scale_spread`` is the log-normal sigma of the
    per-column scale factors (0 gives uniformly scaled columns).  A
    positive ``outlier_fraction`` blows up the noise on that share of
    rows by ``outlier_scale``, and ``label_noise`` flips that fraction
    of labels after the features are drawn; both kinds of contamination
    make single fitted models unstable.  ``nuisance_scale`` amplifies
    the class-free latent factors relative to the class-bearing one.
    """
    if n_samples < 4 or n_features < 1:
        raise InvalidInputError("need n_samples >= 4 and n_features >= 1")
    if n_latent is None:
        n_latent = min(4, n_features)
    if not (1 <= n_latent <= n_features):
        raise InvalidInputError("n_latent must be in [1, n_features]")
    if not (0.0 < pos_fraction < 1.0):
        raise InvalidInputError("pos_fraction must be in (0, 1)")
    if not (0.0 <= outlier_fraction < 1.0):
        raise InvalidInputError("outlier_fraction must be in [0, 1)")
    if not (0.0 <= label_noise < 0.5):
        raise InvalidInputError("label_noise must be in [0, 0.5)")
    n_pos = int(round(n_samples * pos_fraction))
    n_pos = min(max(n_pos, 2), n_samples - 2)

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    y = np.full(n_samples, -1.0)
    y[rng.permutation(n_samples)[:n_pos]] = 1.0

    Z = rng.standard_normal((n_samples, n_latent))
    Z[:, 0] += 0.5 * class_sep * y
    if n_latent > 1 and nuisance_scale != 1.0:
        Z[:, 1:] *= nuisance_scale
    loadings = rng.standard_normal((n_latent, n_features)) / np.sqrt(n_latent)
    E = noise * rng.standard_normal((n_samples, n_features))
    if outlier_fraction > 0.0:
        n_out = int(round(outlier_fraction * n_samples))
        rows = rng.permutation(n_samples)[:n_out]
        E[rows] *= outlier_scale
    X = Z @ loadings + E
    if label_noise > 0.0:
        n_flip = int(round(label_noise * n_samples))
        flip = rng.permutation(n_samples)[:n_flip]
        y[flip] = -y[flip]
    if scale_spread > 0.0:
        scales = np.exp(scale_spread * rng.standard_normal(n_features))
        X = X * scales
    X = X + rng.normal(0.0, 2.0, size=n_features)  # arbitrary column offsets

    prov = Provenance(
        source=f"synthetic:{name}",
        log=[
            f"latent-factor synthetic data: n={n_samples}, k={n_features}, "
            f"latent={n_latent}, class_sep={class_sep}, noise={noise}, "
            f"seed={seed}"
        ],
        rows_in=n_samples,
        rows_out=n_samples,
        cols_in=n_features,
        cols_out=n_features,
    )
    names = [f"f{i}" for i in range(n_features)]
    return Dataset(name=name, X=X, y=y, feature_names=names, provenance=prov)


def dataset_to_csv(
    ds: Dataset,
    csv_path,
    positive_label: str = "pos",
    negative_label: str = "neg",
    with_id_column: bool = True,
    delimiter: str = ",",
) -> dict:
    """Write a Dataset as a delimited file and return its manifest dict.

    The optional leading id column and the string class labels exercise
    the same cleaning steps a real file would need.
    """
    csv_path = Path(csv_path)
    header = (["id"] if with_id_column else []) + ds.feature_names + ["class"]
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter)
        w.writerow(header)
        for i in range(ds.n_samples):
            label = positive_label if ds.y[i] > 0 else negative_label
            row = ([f"s{i:05d}"] if with_id_column else [])
            row += [repr(float(v)) for v in ds.X[i]]
            row.append(label)
            w.writerow(row)
    manifest = {
        "name": ds.name,
        "data": csv_path.name,
        "delimiter": delimiter,
        "has_header": True,
        "label_column": "class",
        "positive_label": positive_label,
        "negative_label": negative_label,
    }
    if with_id_column:
        manifest["drop_columns"] = ["id"]
    return manifest


def write_manifest(manifest: dict, path) -> Path:
    """Write a manifest dict next to its data file."""
    p = Path(path)
    p.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return p
