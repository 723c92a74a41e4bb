"""Benchmark harness: repeated random splits, shared model-order
selection, five projection methods, Gaussian naive Bayes scoring, and
deterministic result files.

Per repeat, a dataset is split into calibration, prediction, and
validation parts.  The PLS component count is selected once by
cross-validation on calibration and shared by every PLS-based method.
Each method produces a projection; a Gaussian naive Bayes fit on
calibration scores yields train accuracy (calibration) and test
accuracy (prediction).  The fused-ensemble method additionally uses the
validation part to pick its sub-models.  All randomness is derived from
one master seed, and the emitted files contain no timing or other
machine state, so identical configurations produce byte-identical
outputs.
"""

from __future__ import annotations

import json
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .data import Dataset, Provenance, SplitSpec, load_dataset, split_three_way
from .ensemble import fit_bagging_pls, fit_pma, pma_transform, select_submodels, train_submodels
from .errors import ConfigError, ExperimentError, InvalidInputError, PmaError
from .evaluate import default_latent_grid, fit_gnb, gnb_evaluate, select_latent_count
from .lda import fit_lda, fit_pls_lda, lda_project, pls_lda_project
from .linalg import standardize
from .pls import fit_pls, project_scores

METHODS = ("PLS", "LDA", "PLS-LDA", "BaggingPLS", "PMA")

#: methods whose first stage is PLS and therefore share the selected
#: latent-component count
PLS_BASED = ("PLS", "PLS-LDA", "BaggingPLS", "PMA")

ROLES = ("train", "test")

SWEEP_AXES = ("submodels", "dims")


@dataclass(frozen=True)
class ExperimentConfig:
    """Every knob of a benchmark run.  Immutable and JSON-round-trippable."""

    datasets: tuple[str, ...]
    methods: tuple[str, ...] = METHODS
    repeats: int = 20
    calibration: float = 0.49
    prediction: float = 0.30
    validation: float = 0.21
    n_submodels: int = 100
    n_selected: int = 15
    bagging_submodels: int = 15
    dim: float = 1
    latent_grid: tuple[int, ...] | None = None
    cv_folds: int = 10
    seed: int = 0
    standardize: bool = False
    pooled_gnb: bool = False
    parallel: bool = False

    def validate(self) -> None:
        if not self.datasets:
            raise ConfigError("at least one dataset manifest is required")
        if not self.methods:
            raise ConfigError("at least one method is required")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigError(
                f"unknown methods {unknown}; choose from {list(METHODS)}"
            )
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("methods list contains duplicates")
        if self.repeats < 1:
            raise ConfigError("repeats must be at least 1")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.n_submodels < 1 or self.bagging_submodels < 1:
            raise ConfigError("sub-model counts must be positive")
        if not (1 <= self.n_selected <= self.n_submodels):
            raise ConfigError(
                f"n_selected must be in [1, {self.n_submodels}]"
            )
        if self.cv_folds < 2:
            raise ConfigError("cv_folds must be at least 2")
        d = float(self.dim)
        if d <= 0.0 or (d >= 1.0 and d != int(d)):
            raise ConfigError(
                "dim must be a positive integer or a fraction in (0, 1)"
            )
        if self.latent_grid is not None:
            if not self.latent_grid or any(int(a) < 1 for a in self.latent_grid):
                raise ConfigError("latent_grid must list positive integers")
        try:
            self.split_spec()
        except InvalidInputError as e:
            raise ConfigError(str(e)) from e

    def split_spec(self) -> SplitSpec:
        return SplitSpec(
            calibration=self.calibration,
            prediction=self.prediction,
            validation=self.validation,
        )

    def to_dict(self) -> dict:
        d = {
            "datasets": list(self.datasets),
            "methods": list(self.methods),
            "repeats": self.repeats,
            "calibration": self.calibration,
            "prediction": self.prediction,
            "validation": self.validation,
            "n_submodels": self.n_submodels,
            "n_selected": self.n_selected,
            "bagging_submodels": self.bagging_submodels,
            "dim": self.dim,
            "latent_grid": list(self.latent_grid) if self.latent_grid else None,
            "cv_folds": self.cv_folds,
            "seed": self.seed,
            "standardize": self.standardize,
            "pooled_gnb": self.pooled_gnb,
            "parallel": self.parallel,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if "datasets" not in d:
            raise ConfigError("config is missing 'datasets'")
        kwargs = dict(d)
        kwargs["datasets"] = tuple(str(p) for p in d["datasets"])
        if "methods" in d:
            kwargs["methods"] = tuple(d["methods"])
        if d.get("latent_grid") is not None:
            kwargs["latent_grid"] = tuple(int(a) for a in d["latent_grid"])
        try:
            cfg = cls(**kwargs)
        except TypeError as e:
            raise ConfigError(f"bad config value: {e}") from e
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        p = Path(path)
        try:
            raw = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {p}: {e}") from e
        if isinstance(raw, dict) and "datasets" in raw:
            # dataset manifest paths are relative to the config file
            raw = dict(raw)
            raw["datasets"] = [str((p.parent / ds).resolve()) for ds in raw["datasets"]]
        return cls.from_dict(raw)


@dataclass
class RunRecord:
    """One method on one repeat of one dataset."""

    dataset: str
    method: str
    repeat: int
    train_accuracy: float | None
    test_accuracy: float | None
    latent_count: int | None
    wall_time: float
    error: str | None = None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: list[RunRecord]
    aggregates: dict
    warnings: list[str] = field(default_factory=list)
    sweep_axis: str | None = None
    sweep_value: float | None = None


def _child_seed(master: int, *key: int) -> int:
    ss = np.random.SeedSequence(master, spawn_key=tuple(key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _ordered_mean(values: list[float]) -> float:
    acc = 0.0
    for v in values:
        acc += v
    return acc / len(values)


def _ordered_std(values: list[float], mean: float) -> float:
    if len(values) < 2:
        return 0.0
    acc = 0.0
    for v in values:
        acc += (v - mean) ** 2
    return float(np.sqrt(acc / (len(values) - 1)))


def _standardized_part(part: Dataset, params) -> Dataset:
    prov = Provenance(
        source=part.provenance.source,
        log=part.provenance.log + ["columns standardized with calibration parameters"],
        rows_in=part.provenance.rows_in,
        rows_out=part.n_samples,
        cols_in=part.provenance.cols_in,
        cols_out=part.n_features,
    )
    return Dataset(
        name=part.name,
        X=params.apply(part.X),
        y=part.y,
        feature_names=list(part.feature_names),
        provenance=prov,
    )


def _run_one_repeat(
    ds: Dataset, config: ExperimentConfig, repeat: int
) -> list[RunRecord]:
    records: list[RunRecord] = []

    def fail_all(message: str) -> list[RunRecord]:
        return [
            RunRecord(ds.name, m, repeat, None, None, None, 0.0, error=message)
            for m in config.methods
        ]

    split_seed = _child_seed(config.seed, repeat, 0)
    cv_seed = _child_seed(config.seed, repeat, 1)
    bag_seed = _child_seed(config.seed, repeat, 2)
    pma_seed = _child_seed(config.seed, repeat, 3)

    try:
        cal, pred, val = split_three_way(ds, config.split_spec(), split_seed)
        if config.standardize:
            _, params = standardize(cal.X)
            cal = _standardized_part(cal, params)
            pred = _standardized_part(pred, params)
            val = _standardized_part(val, params)
    except PmaError as e:
        return fail_all(f"split failed: {e}")

    latent = None
    cv_error = None
    if any(m in PLS_BASED for m in config.methods):
        try:
            grid = config.latent_grid or default_latent_grid(
                cal.n_samples, cal.n_features, config.cv_folds
            )
            latent = select_latent_count(
                cal.X, cal.y, grid, config.cv_folds, cv_seed
            )
        except PmaError as e:
            cv_error = f"component selection failed: {e}"

    for method in config.methods:
        uses_latent = method in PLS_BASED
        t0 = time.perf_counter()
        try:
            if uses_latent and cv_error is not None:
                raise ExperimentError(cv_error)
            s_train, s_test = _project_method(
                method, cal, pred, val, latent, config, bag_seed, pma_seed
            )
            gnb = fit_gnb(s_train, cal.y, pooled=config.pooled_gnb)
            train_acc = gnb_evaluate(gnb, s_train, cal.y)
            test_acc = gnb_evaluate(gnb, s_test, pred.y)
            records.append(
                RunRecord(
                    ds.name,
                    method,
                    repeat,
                    train_acc,
                    test_acc,
                    latent if uses_latent else None,
                    time.perf_counter() - t0,
                )
            )
        except PmaError as e:
            records.append(
                RunRecord(
                    ds.name,
                    method,
                    repeat,
                    None,
                    None,
                    latent if uses_latent else None,
                    time.perf_counter() - t0,
                    error=str(e),
                )
            )
    return records


def _project_method(
    method: str,
    cal: Dataset,
    pred: Dataset,
    val: Dataset,
    latent: int | None,
    config: ExperimentConfig,
    bag_seed: int,
    pma_seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    if method == "PLS":
        model = fit_pls(cal.X, cal.y, latent)
        d = model.beta[:, None]
        return (
            project_scores(d, cal.X, model.x_center),
            project_scores(d, pred.X, model.x_center),
        )
    if method == "LDA":
        model = fit_lda(cal.X, cal.y)
        return lda_project(model, cal.X), lda_project(model, pred.X)
    if method == "PLS-LDA":
        pls_m, lda_m = fit_pls_lda(cal.X, cal.y, latent)
        return (
            pls_lda_project(pls_m, lda_m, cal.X),
            pls_lda_project(pls_m, lda_m, pred.X),
        )
    if method == "BaggingPLS":
        beta = fit_bagging_pls(
            cal.X, cal.y, config.bagging_submodels, latent, bag_seed
        )
        center = cal.X.mean(axis=0)
        d = beta[:, None]
        return (
            project_scores(d, cal.X, center),
            project_scores(d, pred.X, center),
        )
    if method == "PMA":
        pool = train_submodels(cal, config.n_submodels, latent, pma_seed)
        selected = select_submodels(pool, val, config.n_selected)
        model = fit_pma(selected, config.dim)
        return pma_transform(model, cal.X), pma_transform(model, pred.X)
    raise ConfigError(f"unknown method '{method}'")


def load_datasets(config: ExperimentConfig) -> list[Dataset]:
    """Load every dataset manifest in the config, checking name uniqueness."""
    out = []
    seen = set()
    for path in config.datasets:
        ds = load_dataset(path)
        if ds.name in seen:
            raise ConfigError(f"duplicate dataset name '{ds.name}'")
        seen.add(ds.name)
        out.append(ds)
    return out


def _aggregate(runs: list[RunRecord]) -> dict:
    agg: dict = {}
    by_cell: dict = {}
    for rec in runs:
        by_cell.setdefault((rec.dataset, rec.method), []).append(rec)
    for (dataset, method), recs in by_cell.items():
        recs = sorted(recs, key=lambda r: r.repeat)
        failed = [r for r in recs if r.error is not None]
        if len(failed) * 2 > len(recs):
            raise ExperimentError(
                f"{dataset}/{method}: {len(failed)} of {len(recs)} repeats "
                f"failed (first: {failed[0].error})"
            )
        for role, attr in (("train", "train_accuracy"), ("test", "test_accuracy")):
            vals = [getattr(r, attr) for r in recs if r.error is None]
            if vals:
                mean = _ordered_mean(vals)
                agg[(dataset, method, role)] = {
                    "mean": mean,
                    "std": _ordered_std(vals, mean),
                    "n": len(vals),
                }
            else:
                agg[(dataset, method, role)] = {"mean": None, "std": None, "n": 0}
    return agg


def _run_loaded(config: ExperimentConfig, datasets: list[Dataset]) -> ExperimentResult:
    runs: list[RunRecord] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for ds in datasets:
            if config.parallel:
                with ThreadPoolExecutor(max_workers=4) as pool:
                    per_repeat = list(
                        pool.map(
                            lambda r: _run_one_repeat(ds, config, r),
                            range(config.repeats),
                        )
                    )
            else:
                per_repeat = [
                    _run_one_repeat(ds, config, r) for r in range(config.repeats)
                ]
            for recs in per_repeat:
                runs.extend(recs)
    notes = sorted({f"{w.category.__name__}: {w.message}" for w in caught})
    for rec in runs:
        if rec.error is not None:
            notes.append(
                f"excluded {rec.dataset}/{rec.method} repeat {rec.repeat}: {rec.error}"
            )
    aggregates = _aggregate(runs)
    return ExperimentResult(
        config=config, runs=runs, aggregates=aggregates, warnings=notes
    )


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the full benchmark the configuration describes."""
    config.validate()
    return _run_loaded(config, load_datasets(config))


def run_sweep(config: ExperimentConfig, axis: str, values) -> list[ExperimentResult]:
    """Re-run the fused-ensemble method with one parameter swept.

    ``axis`` is 'submodels' (how many sub-models survive selection) or
    'dims' (how many fused directions are kept).  Everything else,
    seeds included, stays fixed, so curves are comparable point to
    point.
    """
    config.validate()
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {list(SWEEP_AXES)}")
    vals = [int(v) for v in values]
    if not vals or any(v < 1 for v in vals):
        raise ConfigError("sweep values must be positive integers")
    datasets = load_datasets(config)
    if axis == "submodels":
        bad = [v for v in vals if v > config.n_submodels]
        if bad:
            raise ConfigError(
                f"cannot select {bad[0]} sub-models from a pool of "
                f"{config.n_submodels}"
            )
    else:
        min_k = min(ds.n_features for ds in datasets)
        bad = [v for v in vals if v > min_k]
        if bad:
            raise ConfigError(
                f"dims value {bad[0]} exceeds the smallest feature count ({min_k})"
            )
    results = []
    for v in vals:
        if axis == "submodels":
            cfg = replace(config, methods=("PMA",), n_selected=v)
        else:
            cfg = replace(config, methods=("PMA",), dim=v)
        res = _run_loaded(cfg, datasets)
        res.sweep_axis = axis
        res.sweep_value = v
        results.append(res)
    return results


def _format_cell(value) -> str:
    return "" if value is None else f"{value:.4f}"


def _table_lines(result: ExperimentResult, role: str) -> list[str]:
    cfg = result.config
    names = []
    for rec in result.runs:
        if rec.dataset not in names:
            names.append(rec.dataset)
    header = "dataset," + ",".join(cfg.methods)
    lines = [header]
    for ds in names:
        cells = [
            _format_cell(result.aggregates[(ds, m, role)]["mean"])
            for m in cfg.methods
        ]
        lines.append(ds + "," + ",".join(cells))
    return lines


def _table_json(result: ExperimentResult, role: str) -> dict:
    cfg = result.config
    names = []
    for rec in result.runs:
        if rec.dataset not in names:
            names.append(rec.dataset)
    values: dict = {}
    for ds in names:
        values[ds] = {}
        for m in cfg.methods:
            mean = result.aggregates[(ds, m, role)]["mean"]
            values[ds][m] = None if mean is None else round(mean, 4)
    return values


def emit_results(results, out_dir, fmt: str = "csv") -> list[Path]:
    """Write result files into ``out_dir`` and return the paths written.

    A single result produces the train and test accuracy tables, the
    per-run accuracy listing, and a metadata echo.  A list of sweep
    results produces one plot-ready table per sweep plus metadata.
    Nothing written here depends on wall time or host state, so two runs
    of the same configuration match byte for byte.
    """
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if isinstance(results, ExperimentResult):
        result = results
        for role, stem in (("train", "train_accuracy"), ("test", "test_accuracy")):
            if fmt == "csv":
                path = out / f"{stem}.csv"
                path.write_text("\n".join(_table_lines(result, role)) + "\n")
            else:
                path = out / f"{stem}.json"
                path.write_text(
                    json.dumps(_table_json(result, role), indent=2, sort_keys=True)
                    + "\n"
                )
            written.append(path)

        runs_path = out / "runs.csv"
        lines = ["dataset,method,repeat,split_role,accuracy"]
        for rec in result.runs:
            if rec.error is not None:
                continue
            lines.append(
                f"{rec.dataset},{rec.method},{rec.repeat},train,{rec.train_accuracy!r}"
            )
            lines.append(
                f"{rec.dataset},{rec.method},{rec.repeat},test,{rec.test_accuracy!r}"
            )
        runs_path.write_text("\n".join(lines) + "\n")
        written.append(runs_path)
        written.append(_write_metadata(out, result.config, result.warnings))
        return written

    results = list(results)
    if not results:
        raise ConfigError("no sweep results to emit")
    axis = results[0].sweep_axis or "axis"
    sweep_path = out / f"sweep_{axis}.csv"
    lines = [f"{axis},dataset,split_role,mean_accuracy,std_accuracy,n_runs"]
    for res in results:
        names = []
        for rec in res.runs:
            if rec.dataset not in names:
                names.append(rec.dataset)
        for ds in names:
            for role in ROLES:
                cell = res.aggregates[(ds, "PMA", role)]
                mean = "" if cell["mean"] is None else repr(cell["mean"])
                std = "" if cell["std"] is None else repr(cell["std"])
                lines.append(
                    f"{res.sweep_value},{ds},{role},{mean},{std},{cell['n']}"
                )
    sweep_path.write_text("\n".join(lines) + "\n")
    written.append(sweep_path)
    all_warnings = sorted({w for res in results for w in res.warnings})
    meta_extra = {
        "sweep_axis": axis,
        "sweep_values": [res.sweep_value for res in results],
    }
    written.append(
        _write_metadata(out, results[0].config, all_warnings, meta_extra)
    )
    return written


def _write_metadata(out: Path, config: ExperimentConfig, notes, extra=None) -> Path:
    import pmakit

    meta = {
        "config": config.to_dict(),
        "package_version": pmakit.__version__,
        "numpy_version": np.__version__,
        "python_version": ".".join(str(v) for v in sys.version_info[:3]),
        "warnings": list(notes),
    }
    if extra:
        meta.update(extra)
    path = out / "metadata.json"
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path
