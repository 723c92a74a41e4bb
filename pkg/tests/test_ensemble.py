import numpy as np
import pytest

from pmakit.data import Dataset, Provenance
from pmakit.ensemble import (
    average_coefficients,
    bootstrap_indices,
    fit_bagging_pls,
    fit_pma,
    pma_transform,
    score_submodels,
    select_submodels,
    train_submodels,
)
from pmakit.errors import DegeneratePoolError, InvalidInputError
from pmakit.synth import make_latent_dataset

from oracles import column_mean_loops


def _dataset(rng, n=80, k=6, sep=4.0):
    return make_latent_dataset(
        "pool-data", n, k, class_sep=sep, noise=0.5,
        seed=int(rng.integers(0, 2**31)),
    )


class TestBootstrapIndices:
    def test_shape_and_range(self):
        draws = bootstrap_indices(25, 10, seed=3)
        assert len(draws) == 10
        for idx in draws:
            assert idx.shape == (25,)
            assert idx.min() >= 0 and idx.max() < 25

    def test_deterministic_per_seed(self):
        a = bootstrap_indices(30, 5, seed=7)
        b = bootstrap_indices(30, 5, seed=7)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)

    def test_draws_do_not_depend_on_pool_size(self):
        # sub-model i sees its own stream, so growing the pool never
        # changes what earlier sub-models sampled
        small = bootstrap_indices(30, 5, seed=7)
        large = bootstrap_indices(30, 12, seed=7)
        for i in range(5):
            np.testing.assert_array_equal(small[i], large[i])

    def test_invalid_sizes_rejected(self):
        with pytest.raises(InvalidInputError):
            bootstrap_indices(0, 5)
        with pytest.raises(InvalidInputError):
            bootstrap_indices(5, 0)


class TestAverageCoefficients:
    def test_simple_mean(self):
        B = np.array([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(average_coefficients(B), [1.5, 3.5])

    def test_bit_exact_against_ordered_loop(self, rng):
        # scales differing by many orders of magnitude make summation
        # order visible; the library must match the left fold exactly
        B = rng.normal(size=(12, 9)) * np.logspace(-8, 8, 9)
        got = average_coefficients(B)
        want = column_mean_loops(B)
        assert np.array_equal(got, want)


class TestSubmodelPool:
    def test_pool_shapes_and_center(self, rng):
        ds = _dataset(rng)
        pool = train_submodels(ds, 12, 3, seed=5)
        assert pool.coefficients.shape == (6, 12)
        assert pool.n_submodels == 12
        assert len(pool.sample_indices) == 12
        assert np.all(pool.effective_components <= 3)
        np.testing.assert_allclose(pool.x_center, ds.X.mean(axis=0))
        assert np.all(np.isnan(pool.val_accuracies))

    def test_same_seed_same_pool(self, rng):
        ds = _dataset(rng)
        a = train_submodels(ds, 8, 2, seed=11)
        b = train_submodels(ds, 8, 2, seed=11)
        np.testing.assert_array_equal(a.coefficients, b.coefficients)

    def test_bagging_is_the_pool_average(self, rng):
        ds = _dataset(rng)
        pool = train_submodels(ds, 10, 2, seed=4)
        bagged = fit_bagging_pls(ds.X, ds.y, 10, 2, seed=4)
        np.testing.assert_array_equal(
            bagged, average_coefficients(pool.coefficients)
        )

    def test_constant_response_exhausts_retries(self, rng):
        X = rng.normal(size=(20, 4))
        ds = Dataset(
            "flat", X, np.ones(20), [f"f{i}" for i in range(4)], Provenance("t")
        )
        with pytest.raises(DegeneratePoolError):
            train_submodels(ds, 3, 2, seed=0)

    def test_tiny_balanced_data_survives_resampling(self):
        # resamples of four samples often lose a class; the per-stream
        # retry must absorb that across many seeds
        ds = make_latent_dataset("tiny", 8, 3, class_sep=5.0, seed=0)
        for seed in range(40):
            pool = train_submodels(ds, 4, 1, seed=seed)
            assert pool.coefficients.shape == (3, 4)


class TestSelection:
    def test_scores_land_in_unit_interval(self, rng):
        ds = _dataset(rng, n=90)
        val = _dataset(rng, n=40)
        pool = train_submodels(ds, 9, 2, seed=1)
        acc = score_submodels(pool, val)
        assert acc.shape == (9,)
        assert np.all((acc >= 0.0) & (acc <= 1.0))
        np.testing.assert_array_equal(pool.val_accuracies, acc)

    def test_keeps_the_best_by_validation_accuracy(self, rng):
        ds = _dataset(rng, n=90)
        val = _dataset(rng, n=40)
        pool = train_submodels(ds, 10, 2, seed=2)
        selected = select_submodels(pool, val, 4)
        assert selected.n_submodels == 4
        full_acc = pool.val_accuracies
        kept = sorted(np.argsort(-full_acc, kind="stable")[:4])
        np.testing.assert_array_equal(selected.val_accuracies, full_acc[kept])
        np.testing.assert_array_equal(
            selected.coefficients, pool.coefficients[:, kept]
        )

    def test_selection_bounds(self, rng):
        ds = _dataset(rng)
        val = _dataset(rng, n=30)
        pool = train_submodels(ds, 5, 2, seed=3)
        with pytest.raises(InvalidInputError):
            select_submodels(pool, val, 0)
        with pytest.raises(InvalidInputError):
            select_submodels(pool, val, 6)

    def test_single_class_validation_rejected(self, rng):
        ds = _dataset(rng)
        val = _dataset(rng, n=30)
        val.y[:] = 1.0
        pool = train_submodels(ds, 5, 2, seed=3)
        with pytest.raises(InvalidInputError):
            select_submodels(pool, val, 2)


class TestFitPma:
    def test_matches_singular_directions(self, rng):
        # the fused directions of the coefficient matrix B are the left
        # singular vectors of B, up to sign
        ds = _dataset(rng, n=100, k=8)
        pool = train_submodels(ds, 12, 3, seed=6)
        model = fit_pma(pool, dim=3)
        U = np.linalg.svd(pool.coefficients, full_matrices=False)[0]
        for j in range(3):
            u = U[:, j]
            v = model.principal_models[:, j]
            assert min(
                np.linalg.norm(v - u), np.linalg.norm(v + u)
            ) <= 1e-8

    def test_eigenvalues_are_squared_singular_values(self, rng):
        ds = _dataset(rng, n=100, k=8)
        pool = train_submodels(ds, 12, 3, seed=6)
        model = fit_pma(pool, dim=2)
        s = np.linalg.svd(pool.coefficients, compute_uv=False)
        np.testing.assert_allclose(
            model.fused_spectrum.eigenvalues[:12], s**2,
            atol=1e-8 * s[0] ** 2,
        )

    def test_directions_are_orthonormal(self, rng):
        ds = _dataset(rng, n=90, k=7)
        pool = train_submodels(ds, 10, 2, seed=7)
        model = fit_pma(pool, dim=4)
        U = model.principal_models
        np.testing.assert_allclose(U.T @ U, np.eye(4), atol=1e-10)

    def test_identical_submodels_fuse_to_their_direction(self, rng):
        beta = rng.normal(size=5)
        pool_like = train_submodels(_dataset(rng, k=5), 4, 1, seed=8)
        pool_like.coefficients = np.tile(beta[:, None], (1, 4))
        model = fit_pma(pool_like, dim=1)
        unit = beta / np.linalg.norm(beta)
        v = model.principal_models[:, 0]
        assert min(np.linalg.norm(v - unit), np.linalg.norm(v + unit)) <= 1e-10
        lam = model.fused_spectrum.eigenvalues
        assert lam[0] == pytest.approx(4 * float(beta @ beta), rel=1e-10)
        assert np.all(np.abs(lam[1:]) <= 1e-10 * lam[0])

    def test_fractional_dim_covers_eigenvalue_mass(self, rng):
        ds = _dataset(rng, n=90, k=6)
        pool = train_submodels(ds, 10, 2, seed=9)
        model = fit_pma(pool, dim=0.99)
        lam = np.clip(model.fused_spectrum.eigenvalues, 0.0, None)
        covered = lam[: model.dim].sum() / lam.sum()
        assert covered >= 0.99

    def test_oversized_dim_clamps_to_rank_with_warning(self, rng):
        ds = _dataset(rng, n=60, k=4)
        pool = train_submodels(ds, 6, 2, seed=10)
        with pytest.warns(UserWarning, match="clamped"):
            model = fit_pma(pool, dim=9)
        assert model.dim <= 4

    def test_zero_pool_rejected(self, rng):
        pool = train_submodels(_dataset(rng, k=5), 4, 1, seed=8)
        pool.coefficients = np.zeros_like(pool.coefficients)
        with pytest.raises(DegeneratePoolError):
            fit_pma(pool)

    def test_transform_centers_then_projects(self, rng):
        ds = _dataset(rng, n=70, k=6)
        pool = train_submodels(ds, 8, 2, seed=12)
        model = fit_pma(pool, dim=2)
        Xnew = rng.normal(size=(5, 6))
        manual = (Xnew - model.x_center) @ model.principal_models
        np.testing.assert_allclose(pma_transform(model, Xnew), manual, atol=1e-12)
        with pytest.raises(InvalidInputError):
            pma_transform(model, np.ones((2, 7)))
