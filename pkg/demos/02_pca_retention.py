"""How many directions does it take to keep 95% of the variance?

Run:  python3 demos/02_pca_retention.py
"""

import numpy as np

from pmakit import explained_ratio, fit_pca, pca_transform

rng = np.random.default_rng(11)

# build data whose columns are mixtures of 3 shared factors plus a
# little independent noise; the correlation structure survives the
# per-column standardization that fit_pca applies internally
n, k = 200, 12
factors = rng.normal(size=(n, 3)) * np.array([8.0, 5.0, 3.0])
X = factors @ rng.normal(size=(3, k)) + 0.6 * rng.normal(size=(n, k))

model = fit_pca(X)  # default keeps 95% of the (standardized) variance
print(f"{model.retained} of {k} directions retained")

print("\ncumulative share per direction:")
for i, share in enumerate(explained_ratio(model), start=1):
    bar = "#" * int(round(40 * share))
    print(f"  {i:>2d}  {share:6.3f}  {bar}")

Z = pca_transform(model, X)
print(f"\nprojected shape: {Z.shape}")

# asking for an exact count instead of a fraction
model3 = fit_pca(X, retain=3)
print(f"retain=3 keeps {model3.retained} directions")

# standardization happens inside, so raw column scales do not buy a
# column any extra importance
X_rescaled = X.copy()
X_rescaled[:, -1] *= 1e6
model_rescaled = fit_pca(X_rescaled)
print(f"after scaling one noise column by 1e6: "
      f"{model_rescaled.retained} retained (unchanged)")
