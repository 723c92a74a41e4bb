"""pmakit: deterministic dimension reduction and ensemble fusion.

Bootstrapped partial-least-squares sub-models fused through an
eigendecomposition of their joint coefficient matrix, alongside the
single-model baselines (PLS, PCA, LDA, PLS-LDA, coefficient bagging)
and a benchmark harness that compares them on two-class data with
byte-reproducible outputs.
"""

from .errors import (
    ConfigError,
    DataError,
    DegeneratePoolError,
    ExperimentError,
    IngestionError,
    InvalidInputError,
    PmaError,
    SingularMatrixError,
    StratificationError,
)
from .linalg import (
    EigenSystem,
    StandardizationParams,
    covariance_matrix,
    retention_count,
    solve_spd,
    standardize,
    sym_eig,
)
from .pls import (
    PlsModel,
    coefficient_for,
    coefficients,
    fit_pls,
    predict,
    project_scores,
    score_directions,
)
from .pca import PcaModel, explained_ratio, fit_pca, pca_transform
from .lda import (
    LdaModel,
    fit_lda,
    fit_pls_lda,
    lda_project,
    pls_lda_direction,
    pls_lda_project,
)
from .evaluate import (
    GnbModel,
    default_latent_grid,
    fit_gnb,
    gnb_evaluate,
    gnb_predict,
    select_latent_count,
    stratified_folds,
)
from .data import (
    Dataset,
    Provenance,
    SplitSpec,
    derive_variant,
    load_dataset,
    read_manifest,
    split_three_way,
)
from .ensemble import (
    PmaModel,
    SubmodelPool,
    average_coefficients,
    bootstrap_indices,
    fit_bagging_pls,
    fit_pma,
    pma_transform,
    score_submodels,
    select_submodels,
    train_submodels,
)
from .modelio import load_pca, load_pls, load_pma, save_pca, save_pls, save_pma
from .synth import dataset_to_csv, make_latent_dataset, write_manifest
from .bench import (
    METHODS,
    ExperimentConfig,
    ExperimentResult,
    RunRecord,
    emit_results,
    run_experiment,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DataError",
    "DegeneratePoolError",
    "ExperimentError",
    "IngestionError",
    "InvalidInputError",
    "PmaError",
    "SingularMatrixError",
    "StratificationError",
    "EigenSystem",
    "StandardizationParams",
    "covariance_matrix",
    "retention_count",
    "solve_spd",
    "standardize",
    "sym_eig",
    "PlsModel",
    "coefficient_for",
    "coefficients",
    "fit_pls",
    "predict",
    "project_scores",
    "score_directions",
    "PcaModel",
    "explained_ratio",
    "fit_pca",
    "pca_transform",
    "LdaModel",
    "fit_lda",
    "fit_pls_lda",
    "lda_project",
    "pls_lda_direction",
    "pls_lda_project",
    "GnbModel",
    "default_latent_grid",
    "fit_gnb",
    "gnb_evaluate",
    "gnb_predict",
    "select_latent_count",
    "stratified_folds",
    "Dataset",
    "Provenance",
    "SplitSpec",
    "derive_variant",
    "load_dataset",
    "read_manifest",
    "split_three_way",
    "PmaModel",
    "SubmodelPool",
    "average_coefficients",
    "bootstrap_indices",
    "fit_bagging_pls",
    "fit_pma",
    "pma_transform",
    "score_submodels",
    "select_submodels",
    "train_submodels",
    "load_pca",
    "load_pls",
    "load_pma",
    "save_pca",
    "save_pls",
    "save_pma",
    "dataset_to_csv",
    "make_latent_dataset",
    "write_manifest",
    "METHODS",
    "ExperimentConfig",
    "ExperimentResult",
    "RunRecord",
    "emit_results",
    "run_experiment",
    "run_sweep",
    "__version__",
]
