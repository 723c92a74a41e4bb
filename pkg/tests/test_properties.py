"""Randomized invariant checks, at least 100 instances each.

The whole file is meant to stay well under a minute so it can run as a
batch inside the acceptance gate.
"""

import numpy as np
import pytest

import oracles
from pmakit.data import Dataset, Provenance, derive_variant, split_three_way
from pmakit.ensemble import (
    average_coefficients,
    bootstrap_indices,
    fit_pma,
    train_submodels,
)
from pmakit.evaluate import fit_gnb, gnb_predict, stratified_folds
from pmakit.linalg import retention_count, solve_spd, standardize, sym_eig
from pmakit.modelio import (
    load_pca,
    load_pls,
    load_pma,
    save_pca,
    save_pls,
    save_pma,
)
from pmakit.pca import explained_ratio, fit_pca
from pmakit.pls import coefficient_for, fit_pls, predict

N_INSTANCES = 100


def _random_dataset(rng, n, k, name="prop"):
    X = rng.normal(size=(n, k))
    y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    # force both classes
    y[0], y[1] = -1.0, 1.0
    X[y > 0, 0] += 2.0
    return Dataset(name=name, X=X, y=y,
                   feature_names=[f"f{j}" for j in range(k)],
                   provenance=Provenance(source="memory"))


def test_standardize_gives_unit_columns():
    rng = np.random.default_rng(101)
    for _ in range(N_INSTANCES):
        n = int(rng.integers(5, 40))
        k = int(rng.integers(1, 8))
        X = rng.normal(loc=rng.normal(scale=5), scale=rng.uniform(0.1, 9),
                       size=(n, k))
        Xs, params = standardize(X)
        for j in range(k):
            mean, std = oracles.two_pass_mean_std(Xs[:, j])
            assert abs(mean) < 1e-10
            assert abs(std - 1.0) < 1e-10
        again = params.apply(X)
        assert np.array_equal(again, Xs)


def test_standardize_zero_variance_column_maps_to_zero():
    rng = np.random.default_rng(102)
    for _ in range(N_INSTANCES):
        n = int(rng.integers(3, 20))
        X = np.column_stack([np.full(n, rng.normal()), rng.normal(size=n)])
        Xs, _ = standardize(X)
        assert np.all(Xs[:, 0] == 0.0)


def test_sym_eig_reconstructs_and_is_orthonormal():
    rng = np.random.default_rng(103)
    for _ in range(N_INSTANCES):
        k = int(rng.integers(2, 9))
        A = rng.normal(size=(k, k))
        S = A + A.T
        eig = sym_eig(S)
        V, lam = eig.eigenvectors, eig.eigenvalues
        assert np.all(np.diff(lam) <= 1e-12)
        np.testing.assert_allclose(V.T @ V, np.eye(k), atol=1e-10)
        np.testing.assert_allclose(V @ np.diag(lam) @ V.T, S, atol=1e-9)
        # sign convention: the dominant entry of each column is positive
        for j in range(k):
            assert V[np.argmax(np.abs(V[:, j])), j] > 0


def test_sym_eig_matches_closed_form_eigenvalues():
    rng = np.random.default_rng(104)
    for _ in range(N_INSTANCES):
        A2 = rng.normal(size=(2, 2)) * rng.uniform(0.5, 10)
        S2 = A2 + A2.T
        np.testing.assert_allclose(
            sym_eig(S2).eigenvalues, oracles.eigvals_2x2(S2), atol=1e-9)
        A3 = rng.normal(size=(3, 3)) * rng.uniform(0.5, 10)
        S3 = A3 + A3.T
        np.testing.assert_allclose(
            sym_eig(S3).eigenvalues, oracles.eigvals_3x3(S3), atol=1e-9)


def test_solve_spd_matches_elimination():
    rng = np.random.default_rng(105)
    for _ in range(N_INSTANCES):
        k = int(rng.integers(1, 7))
        A = rng.normal(size=(k + 3, k))
        S = A.T @ A + 0.1 * np.eye(k)
        b = rng.normal(size=k)
        x = solve_spd(S, b)
        np.testing.assert_allclose(x, oracles.gauss_solve(S, b), atol=1e-8)
        assert np.linalg.norm(S @ x - b) < 1e-8 * max(1.0, np.linalg.norm(b))


def test_retention_count_matches_scan():
    rng = np.random.default_rng(106)
    for _ in range(N_INSTANCES):
        k = int(rng.integers(1, 12))
        lam = np.sort(np.abs(rng.normal(size=k)))[::-1]
        if k > 1 and rng.random() < 0.3:
            lam[-1] = -1e-15  # tiny negative from round-off
        frac = float(rng.uniform(0.05, 1.0))
        assert retention_count(lam, frac) == oracles.threshold_scan(lam, frac)


def test_pls_scores_orthogonal_and_truncation_matches_refit():
    rng = np.random.default_rng(107)
    for _ in range(N_INSTANCES):
        n = int(rng.integers(12, 40))
        k = int(rng.integers(3, 8))
        a = int(rng.integers(2, min(k, n - 1) + 1))
        X = rng.normal(size=(n, k))
        y = X @ rng.normal(size=k) + 0.2 * rng.normal(size=n)
        model = fit_pls(X, y, a)
        T = model.scores
        G = T.T @ T
        off = G - np.diag(np.diag(G))
        assert np.max(np.abs(off)) < 1e-8 * np.max(np.diag(G))
        # residual block is orthogonal to every extracted score
        assert np.max(np.abs(T.T @ model.x_residual)) < 1e-8
        a_small = int(rng.integers(1, model.n_components + 1))
        direct = fit_pls(X, y, a_small).beta
        np.testing.assert_allclose(
            coefficient_for(model, a_small), direct, atol=1e-10)


def test_pls_at_full_rank_matches_least_squares():
    rng = np.random.default_rng(108)
    for _ in range(N_INSTANCES):
        n = int(rng.integers(15, 40))
        k = int(rng.integers(2, 6))
        X = rng.normal(size=(n, k))
        y = X @ rng.normal(size=k) + 0.5 * rng.normal(size=n)
        model = fit_pls(X, y, k)
        if model.n_components < k:
            continue  # early stop on a degenerate draw
        beta_ols = oracles.ols_centered(X, y)
        np.testing.assert_allclose(model.beta, beta_ols, atol=1e-7)
        yhat = predict(model, X)
        resid = y - yhat
        # least-squares residual is orthogonal to the centered predictors
        Xc = X - X.mean(axis=0)
        assert np.max(np.abs(Xc.T @ resid)) < 1e-6


def test_gnb_agrees_with_scalar_log_joint():
    rng = np.random.default_rng(109)
    for _ in range(N_INSTANCES):
        n = int(rng.integers(10, 40))
        d = int(rng.integers(1, 4))
        scores = rng.normal(size=(n, d))
        labels = np.where(rng.random(n) < 0.5, 1.0, -1.0)
        labels[0], labels[1] = -1.0, 1.0
        model = fit_gnb(scores, labels)
        pred = gnb_predict(model, scores)
        for i in range(n):
            lj = oracles.gnb_log_joint(
                model.priors, model.means, model.variances, scores[i])
            want = model.class_labels[int(np.argmax(lj))]
            if abs(lj[0] - lj[1]) > 1e-12:
                assert pred[i] == want


def test_stratified_folds_partition_and_balance():
    rng = np.random.default_rng(110)
    for _ in range(N_INSTANCES):
        n = int(rng.integers(20, 80))
        n_folds = int(rng.integers(2, 10))
        labels = np.where(rng.random(n) < 0.4, 1.0, -1.0)
        labels[:n_folds] = 1.0
        labels[n_folds:2 * n_folds] = -1.0
        folds = stratified_folds(labels, n_folds, np.random.default_rng(rng.integers(1 << 31)))
        allidx = np.concatenate(folds)
        assert sorted(allidx) == list(range(n))
        for cls in (-1.0, 1.0):
            sizes = [int(np.sum(labels[f] == cls)) for f in folds]
            assert max(sizes) - min(sizes) <= 1


def test_split_three_way_sizes_and_mix():
    rng = np.random.default_rng(111)
    for i in range(N_INSTANCES):
        n = int(rng.integers(20, 120))
        ds = _random_dataset(rng, n, 4)
        try:
            cal, pred, val = split_three_way(ds, seed=i)
        except Exception:
            continue  # extreme class skew cannot always be split
        assert pred.n_samples == int(np.floor(0.30 * n))
        assert val.n_samples == int(np.floor(0.21 * n))
        assert cal.n_samples == n - pred.n_samples - val.n_samples
        # no index is reused and every sample lands somewhere
        total = np.vstack([cal.X, pred.X, val.X])
        assert total.shape[0] == n
        overall_pos = np.mean(ds.y > 0)
        for part in (cal, pred, val):
            part_pos = np.sum(part.y > 0)
            ideal = overall_pos * part.n_samples
            assert abs(part_pos - ideal) <= 1.0 + 1e-9


def test_derive_variant_counts_follow_ratio():
    rng = np.random.default_rng(112)
    base = _random_dataset(np.random.default_rng(0), 400, 3)
    for i in range(N_INSTANCES):
        n_total = int(rng.integers(10, 120))
        ratio = float(rng.uniform(0.2, 4.0))
        n_pos = int(round(n_total * ratio / (1.0 + ratio)))
        if n_pos < 1 or n_total - n_pos < 1:
            continue
        try:
            sub = derive_variant(base, n_total, ratio, seed=i)
        except Exception:
            continue  # requested more of a class than exists
        neg, pos = sub.class_counts()
        assert pos == n_pos
        assert neg == n_total - n_pos


def test_bagging_average_is_bit_exact_left_fold():
    rng = np.random.default_rng(113)
    for _ in range(N_INSTANCES):
        k = int(rng.integers(1, 12))
        m = int(rng.integers(1, 9))
        B = rng.normal(size=(k, m)) * rng.uniform(0.01, 100)
        avg = average_coefficients(B)
        ref = oracles.column_mean_loops(B)
        assert np.array_equal(avg, ref)


def test_pma_directions_orthonormal_and_match_svd():
    rng = np.random.default_rng(114)
    for i in range(N_INSTANCES):
        ds = _random_dataset(rng, 45, 6)
        pool = train_submodels(ds, n_submodels=5, n_components=2, seed=i)
        model = fit_pma(pool, dim=3)
        V = model.fused_spectrum.eigenvectors[:, :3]
        np.testing.assert_allclose(V.T @ V, np.eye(3), atol=1e-10)
        U, s, _ = np.linalg.svd(pool.coefficients, full_matrices=False)
        for j in range(min(3, len(s))):
            if s[j] ** 2 < 1e-10:
                continue
            dot = abs(float(U[:, j] @ V[:, j]))
            assert dot > 1.0 - 1e-7
            assert abs(model.fused_spectrum.eigenvalues[j] - s[j] ** 2) \
                <= 1e-8 * max(1.0, s[j] ** 2)


def test_bootstrap_streams_do_not_depend_on_pool_size():
    rng = np.random.default_rng(115)
    for _ in range(N_INSTANCES):
        n = int(rng.integers(5, 50))
        seed = int(rng.integers(1 << 31))
        small = bootstrap_indices(n, 3, seed)
        large = bootstrap_indices(n, 7, seed)
        for a, b in zip(small, large):
            assert np.array_equal(a, b)


def test_model_files_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(116)
    for i in range(N_INSTANCES):
        n = int(rng.integers(14, 30))
        k = int(rng.integers(3, 7))
        X = rng.normal(size=(n, k))
        y = X @ rng.normal(size=k) + 0.1 * rng.normal(size=n)
        kind = i % 3
        if kind == 0:
            m = fit_pls(X, y, 2)
            save_pls(m, tmp_path / "m.pls")
            r = load_pls(tmp_path / "m.pls")
            assert np.array_equal(m.beta, r.beta)
            assert np.array_equal(m.weights, r.weights)
            assert np.array_equal(m.x_center, r.x_center)
            assert m.y_center == r.y_center
        elif kind == 1:
            m = fit_pca(X, retain=0.9)
            save_pca(m, tmp_path / "m.pca")
            r = load_pca(tmp_path / "m.pca")
            assert np.array_equal(m.eig.eigenvalues, r.eig.eigenvalues)
            assert np.array_equal(m.eig.eigenvectors, r.eig.eigenvectors)
            assert m.retained == r.retained
        else:
            ds = _random_dataset(np.random.default_rng(i), 40, k)
            pool = train_submodels(ds, 4, 2, seed=i)
            m = fit_pma(pool, dim=2)
            save_pma(m, tmp_path / "m.pma")
            r = load_pma(tmp_path / "m.pma")
            assert np.array_equal(m.principal_models, r.principal_models)
            assert np.array_equal(
                m.fused_spectrum.eigenvalues, r.fused_spectrum.eigenvalues)
            assert np.array_equal(m.x_center, r.x_center)
            assert m.dim == r.dim


def test_pca_eigenvalue_total_matches_gram_trace():
    rng = np.random.default_rng(117)
    for _ in range(N_INSTANCES):
        n = int(rng.integers(8, 30))
        k = int(rng.integers(2, 6))
        X = rng.normal(size=(n, k)) * rng.uniform(0.5, 4.0)
        model = fit_pca(X, retain=1.0)
        Xs, _ = standardize(X)
        gram = oracles.gram_matrix_loops(Xs)
        trace = float(np.trace(gram))
        total = float(np.sum(model.eig.eigenvalues))
        assert abs(total - trace) < 1e-8 * max(1.0, trace)
        shares = explained_ratio(model)
        assert np.all(np.diff(shares) >= -1e-12)
        assert abs(float(shares[-1]) - 1.0) < 1e-10


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
