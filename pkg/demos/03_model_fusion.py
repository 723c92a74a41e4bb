"""Bootstrap a pool of PLS sub-models, keep the good ones, fuse them.

The fusion step eigendecomposes the pool's joint coefficient matrix
B B^T and keeps the leading eigenvectors as projection directions.
Compare that against plain coefficient averaging on contaminated data.

Run:  python3 demos/03_model_fusion.py
"""

import numpy as np

from pmakit import (
    fit_bagging_pls,
    fit_gnb,
    fit_pma,
    gnb_evaluate,
    make_latent_dataset,
    pma_transform,
    project_scores,
    score_submodels,
    select_submodels,
    split_three_way,
    train_submodels,
)

# a dataset with outlier rows and amplified nuisance factors, where
# individual sub-models vary a lot in quality
ds = make_latent_dataset(
    "demo", n_samples=600, n_features=20, n_latent=5,
    class_sep=2.2, noise=1.0, outlier_fraction=0.08,
    nuisance_scale=2.5, seed=9,
)
cal, pred, val = split_three_way(ds, seed=0)
print(f"split: {cal.n_samples} calibration, {pred.n_samples} prediction, "
      f"{val.n_samples} validation")

pool = train_submodels(cal, n_submodels=60, n_components=3, seed=0)
acc = score_submodels(pool, val)
print(f"sub-model validation accuracy: min {acc.min():.3f}, "
      f"median {np.median(acc):.3f}, max {acc.max():.3f}")

kept = select_submodels(pool, val, n_keep=10)
fused = fit_pma(kept, dim=1)
lam = fused.fused_spectrum.eigenvalues
print(f"leading eigenvalue carries {lam[0] / lam.sum():.1%} of the "
      f"pool's coefficient energy")

def accuracy_of(train_scores, test_scores):
    gnb = fit_gnb(train_scores, cal.y)
    return gnb_evaluate(gnb, test_scores, pred.y)

fused_acc = accuracy_of(pma_transform(fused, cal.X),
                        pma_transform(fused, pred.X))

beta_bar = fit_bagging_pls(cal.X, cal.y, n_submodels=10, n_components=3)
bag_acc = accuracy_of(
    project_scores(beta_bar[:, None], cal.X, cal.X.mean(axis=0)),
    project_scores(beta_bar[:, None], pred.X, cal.X.mean(axis=0)),
)

print(f"\ntest accuracy, fused direction:       {fused_acc:.4f}")
print(f"test accuracy, averaged coefficients: {bag_acc:.4f}")
