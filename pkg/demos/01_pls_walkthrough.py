"""Walk through a PLS1 fit step by step on synthetic data.

Run:  python3 demos/01_pls_walkthrough.py
"""

import numpy as np

from pmakit import coefficient_for, fit_pls, predict

rng = np.random.default_rng(7)

# 120 samples, 10 features, but only 3 latent factors actually drive y.
# This is the regime PLS is built for: more correlated columns than
# underlying degrees of freedom.
n, k, r = 120, 10, 3
factors = rng.normal(size=(n, r))
mixing = rng.normal(size=(r, k))
X = factors @ mixing + 0.05 * rng.normal(size=(n, k))
y = factors @ np.array([2.0, -1.0, 0.5]) + 0.1 * rng.normal(size=n)

model = fit_pls(X, y, n_components=6)
print(f"asked for 6 components, extraction kept {model.n_components}")

# The score vectors are mutually orthogonal by construction.  Check it.
T = model.scores
gram = T.T @ T
off_diag = gram - np.diag(np.diag(gram))
print(f"largest off-diagonal score product: {np.max(np.abs(off_diag)):.2e}")

# Adding components only helps until the real rank is exhausted.
print("\ncomponents  train RMSE")
for a in range(1, model.n_components + 1):
    beta = coefficient_for(model, a)
    yhat = (X - model.x_center) @ beta + model.y_center
    rmse = float(np.sqrt(np.mean((y - yhat) ** 2)))
    print(f"{a:>10d}  {rmse:.4f}")

# Held-out error tells the same story.
factors_new = rng.normal(size=(40, r))
X_new = factors_new @ mixing + 0.05 * rng.normal(size=(40, k))
y_new = factors_new @ np.array([2.0, -1.0, 0.5]) + 0.1 * rng.normal(size=40)
rmse_new = float(np.sqrt(np.mean((y_new - predict(model, X_new)) ** 2)))
print(f"\nheld-out RMSE with all {model.n_components} components: {rmse_new:.4f}")
