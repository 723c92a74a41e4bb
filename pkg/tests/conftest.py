import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pmakit.prepare import materialize_all, materialize_breast
from pmakit.synth import dataset_to_csv, make_latent_dataset, write_manifest


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("datasets")


@pytest.fixture(scope="session")
def breast_manifest(data_dir):
    """The real diagnostic table, written as CSV plus manifest."""
    return materialize_breast(data_dir / "breast")


@pytest.fixture(scope="session")
def all_manifests(data_dir):
    """The full benchmark corpus: one real dataset, three stand-ins."""
    return materialize_all(data_dir / "corpus")


@pytest.fixture(scope="session")
def small_manifest(data_dir):
    """A quick synthetic dataset for pipeline and CLI tests."""
    ds = make_latent_dataset(
        "smallset", 160, 10, class_sep=3.5, noise=0.4, seed=42
    )
    out = data_dir / "small"
    out.mkdir(exist_ok=True)
    manifest = dataset_to_csv(ds, out / "smallset.csv")
    return write_manifest(manifest, out / "smallset.json")


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
