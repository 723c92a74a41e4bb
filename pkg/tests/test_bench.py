import json
from dataclasses import replace

import numpy as np
import pytest

from pmakit.bench import (
    METHODS,
    ExperimentConfig,
    emit_results,
    run_experiment,
    run_sweep,
)
from pmakit.errors import ConfigError, ExperimentError
from pmakit.synth import dataset_to_csv, make_latent_dataset, write_manifest


@pytest.fixture(scope="module")
def quick_config(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench-data")
    paths = []
    for i, name in enumerate(("alpha", "beta")):
        ds = make_latent_dataset(
            name, 140, 8, class_sep=3.5, noise=0.4, seed=100 + i
        )
        manifest = dataset_to_csv(ds, out / f"{name}.csv")
        paths.append(str(write_manifest(manifest, out / f"{name}.json")))
    return ExperimentConfig(
        datasets=tuple(paths),
        repeats=3,
        n_submodels=10,
        n_selected=4,
        bagging_submodels=5,
    )


class TestConfig:
    def test_defaults_validate(self, quick_config):
        quick_config.validate()

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"datasets": ["d"], "bogus": 1})

    def test_missing_datasets_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"repeats": 3})

    def test_unknown_method_rejected(self, quick_config):
        cfg = replace(quick_config, methods=("PLS", "XGBoost"))
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_selection_larger_than_pool_rejected(self, quick_config):
        cfg = replace(quick_config, n_selected=11)
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_bad_dim_rejected(self, quick_config):
        for dim in (0, -1, 1.5):
            cfg = replace(quick_config, dim=dim)
            with pytest.raises(ConfigError):
                cfg.validate()

    def test_bad_fractions_rejected(self, quick_config):
        cfg = replace(quick_config, calibration=0.9)
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_round_trips_through_dict(self, quick_config):
        again = ExperimentConfig.from_dict(quick_config.to_dict())
        assert again == quick_config

    def test_from_file_resolves_dataset_paths(self, tmp_path, quick_config):
        cfg_path = tmp_path / "config.json"
        d = quick_config.to_dict()
        cfg_path.write_text(json.dumps(d))
        loaded = ExperimentConfig.from_file(cfg_path)
        assert all(p.startswith("/") for p in loaded.datasets)


class TestRunExperiment:
    def test_produces_complete_results(self, quick_config):
        res = run_experiment(quick_config)
        assert len(res.runs) == 2 * len(METHODS) * 3
        for ds in ("alpha", "beta"):
            for m in METHODS:
                for role in ("train", "test"):
                    cell = res.aggregates[(ds, m, role)]
                    assert cell["n"] == 3
                    assert 0.0 <= cell["mean"] <= 1.0

    def test_is_deterministic(self, quick_config):
        a = run_experiment(quick_config)
        b = run_experiment(quick_config)
        for ra, rb in zip(a.runs, b.runs):
            assert ra.train_accuracy == rb.train_accuracy
            assert ra.test_accuracy == rb.test_accuracy

    def test_parallel_matches_sequential(self, quick_config):
        seq = run_experiment(quick_config)
        par = run_experiment(replace(quick_config, parallel=True))
        for ra, rb in zip(seq.runs, par.runs):
            assert (ra.dataset, ra.method, ra.repeat) == (
                rb.dataset, rb.method, rb.repeat,
            )
            assert ra.train_accuracy == rb.train_accuracy
            assert ra.test_accuracy == rb.test_accuracy

    def test_latent_count_shared_across_pls_methods(self, quick_config):
        res = run_experiment(quick_config)
        by_repeat = {}
        for rec in res.runs:
            if rec.latent_count is not None:
                by_repeat.setdefault((rec.dataset, rec.repeat), set()).add(
                    rec.latent_count
                )
        for counts in by_repeat.values():
            assert len(counts) == 1

    def test_majority_failures_raise(self, tmp_path):
        # nine samples of one class and one of the other cannot be
        # split three ways, so every repeat fails
        ds = make_latent_dataset("skew", 40, 5, class_sep=3.0, seed=9)
        ds.y[:] = -1.0
        ds.y[:2] = 1.0
        manifest = dataset_to_csv(ds, tmp_path / "skew.csv")
        man = write_manifest(manifest, tmp_path / "skew.json")
        cfg = ExperimentConfig(datasets=(str(man),), repeats=2)
        with pytest.raises(ExperimentError):
            run_experiment(cfg)


class TestEmit:
    def test_csv_files_and_aggregate_consistency(self, quick_config, tmp_path):
        res = run_experiment(quick_config)
        paths = emit_results(res, tmp_path / "out")
        names = {p.name for p in paths}
        assert names == {
            "train_accuracy.csv", "test_accuracy.csv", "runs.csv",
            "metadata.json",
        }
        # recompute the table from the per-run file: left-fold mean,
        # rendered at four decimals, must match the table cell
        runs_lines = (tmp_path / "out" / "runs.csv").read_text().splitlines()
        acc = {}
        for line in runs_lines[1:]:
            ds, m, rep, role, value = line.split(",")
            acc.setdefault((ds, m, role), []).append(float(value))
        table = (tmp_path / "out" / "test_accuracy.csv").read_text().splitlines()
        header = table[0].split(",")[1:]
        for row in table[1:]:
            cells = row.split(",")
            ds = cells[0]
            for m, cell in zip(header, cells[1:]):
                vals = acc[(ds, m, "test")]
                mean = 0.0
                for v in vals:
                    mean += v
                mean /= len(vals)
                assert f"{mean:.4f}" == cell

    def test_json_tables(self, quick_config, tmp_path):
        res = run_experiment(quick_config)
        paths = emit_results(res, tmp_path / "out", fmt="json")
        names = {p.name for p in paths}
        assert "train_accuracy.json" in names
        table = json.loads((tmp_path / "out" / "test_accuracy.json").read_text())
        assert set(table) == {"alpha", "beta"}
        assert set(table["alpha"]) == set(METHODS)

    def test_byte_identical_reruns(self, quick_config, tmp_path):
        for d in ("one", "two"):
            emit_results(run_experiment(quick_config), tmp_path / d)
        for name in ("train_accuracy.csv", "test_accuracy.csv", "runs.csv",
                     "metadata.json"):
            a = (tmp_path / "one" / name).read_bytes()
            b = (tmp_path / "two" / name).read_bytes()
            assert a == b, name

    def test_metadata_echoes_config(self, quick_config, tmp_path):
        res = run_experiment(quick_config)
        emit_results(res, tmp_path / "out")
        meta = json.loads((tmp_path / "out" / "metadata.json").read_text())
        assert meta["config"]["repeats"] == 3
        assert meta["config"]["seed"] == 0
        assert "numpy_version" in meta
        assert "wall" not in json.dumps(meta).lower()


class TestSweep:
    def test_submodel_sweep_produces_table(self, quick_config, tmp_path):
        results = run_sweep(quick_config, "submodels", [2, 4])
        assert [r.sweep_value for r in results] == [2, 4]
        paths = emit_results(results, tmp_path / "sw")
        sweep = (tmp_path / "sw" / "sweep_submodels.csv").read_text().splitlines()
        assert sweep[0] == "submodels,dataset,split_role,mean_accuracy,std_accuracy,n_runs"
        # 2 values x 2 datasets x 2 roles
        assert len(sweep) == 1 + 8

    def test_dims_sweep_keeps_seeds_fixed(self, quick_config):
        results = run_sweep(quick_config, "dims", [1, 2])
        # the same splits and pools are used at every point; only the
        # retained direction count changes
        r1 = [r for r in results[0].runs if r.repeat == 0 and r.dataset == "alpha"]
        r2 = [r for r in results[1].runs if r.repeat == 0 and r.dataset == "alpha"]
        assert r1[0].latent_count == r2[0].latent_count

    def test_bad_axis_rejected(self, quick_config):
        with pytest.raises(ConfigError):
            run_sweep(quick_config, "noise", [1])

    def test_oversized_submodel_value_rejected(self, quick_config):
        with pytest.raises(ConfigError):
            run_sweep(quick_config, "submodels", [999])

    def test_oversized_dims_value_rejected(self, quick_config):
        with pytest.raises(ConfigError):
            run_sweep(quick_config, "dims", [9])  # datasets have 8 features

    def test_values_must_be_positive(self, quick_config):
        with pytest.raises(ConfigError):
            run_sweep(quick_config, "dims", [])
        with pytest.raises(ConfigError):
            run_sweep(quick_config, "dims", [0])
