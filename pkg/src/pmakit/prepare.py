"""Materialize benchmark datasets as CSV files with manifests.

The breast cancer diagnostic table ships with scikit-learn, so it can
be written out offline, complete with an id column and M/B string
labels so ingestion has real cleaning work to do.  The other benchmark
corpora are not redistributable the same way; for them this module
writes clearly named synthetic stand-ins with matching shapes, so the
full pipeline stays runnable end to end.  Every stand-in is flagged in
its manifest and provenance.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .errors import DataError
from .synth import dataset_to_csv, make_latent_dataset, write_manifest

#: shape-alike stand-ins for corpora that cannot be bundled; the noise,
#: outlier, and label-flip levels are set so single fitted models are
#: visibly less stable than ensembles, which is the regime the fused
#: method is built for
STAND_IN_SPECS = {
    "spambase_like": dict(
        n_samples=4601, n_features=57, n_latent=6, class_sep=2.4,
        noise=0.8, pos_fraction=0.394, outlier_fraction=0.06, seed=101,
    ),
    "gas_like": dict(
        n_samples=4782, n_features=128, n_latent=5, class_sep=2.0,
        noise=1.0, pos_fraction=0.55, outlier_fraction=0.10,
        nuisance_scale=3.0, label_noise=0.08, seed=102,
    ),
    "musk_like": dict(
        n_samples=476, n_features=166, n_latent=8, class_sep=2.0,
        noise=1.2, pos_fraction=0.43, outlier_fraction=0.10, seed=103,
    ),
}


def materialize_breast(out_dir) -> Path:
    """Write the breast cancer diagnostic data as CSV plus manifest.

    Needs scikit-learn (a test/demo dependency, not a runtime one).
    Returns the manifest path.
    """
    try:
        from sklearn.datasets import load_breast_cancer
    except ImportError as e:
        raise DataError(
            "scikit-learn is required to materialize the breast cancer "
            "dataset; install the 'test' extra"
        ) from e
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    bunch = load_breast_cancer()
    csv_path = out_dir / "breast_wdbc.csv"
    header = ["id"] + [n.replace(" ", "_") for n in bunch.feature_names] + ["diagnosis"]
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i in range(bunch.data.shape[0]):
            # target 0 is malignant, 1 is benign; malignant is the
            # positive class here
            label = "M" if bunch.target[i] == 0 else "B"
            row = [f"p{i:06d}"] + [repr(float(v)) for v in bunch.data[i]] + [label]
            w.writerow(row)
    manifest = {
        "name": "breast",
        "data": csv_path.name,
        "delimiter": ",",
        "has_header": True,
        "label_column": "diagnosis",
        "positive_label": "M",
        "negative_label": "B",
        "drop_columns": ["id"],
    }
    return write_manifest(manifest, out_dir / "breast.json")


def materialize_stand_in(name: str, out_dir) -> Path:
    """Write one synthetic stand-in corpus; returns the manifest path."""
    if name not in STAND_IN_SPECS:
        raise DataError(f"unknown stand-in '{name}'")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ds = make_latent_dataset(name, **STAND_IN_SPECS[name])
    csv_path = out_dir / f"{name}.csv"
    manifest = dataset_to_csv(ds, csv_path)
    manifest["synthetic_stand_in"] = True
    return write_manifest(manifest, out_dir / f"{name}.json")


def materialize_all(out_dir) -> list[Path]:
    """Write the breast dataset and every stand-in; returns manifest paths."""
    paths = [materialize_breast(out_dir)]
    for name in STAND_IN_SPECS:
        paths.append(materialize_stand_in(name, out_dir))
    return paths
