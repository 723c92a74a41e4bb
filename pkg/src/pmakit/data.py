"""Dataset ingestion, cleaning, stratified partitioning, and resampling.

Loading is manifest-driven: a small JSON document says where the
delimited text file lives, which column holds the label, which raw
label values map to the positive and negative class, and which columns
to discard up front (sample IDs and similar).  Cleaning is logged line
by line into the dataset's provenance so every dropped row and column
is accounted for.  Surviving cells are the source text parsed as a
float, nothing else.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import IngestionError, InvalidInputError, StratificationError

#: cell values (after stripping, case-insensitive) treated as missing
MISSING_TOKENS = {"", "na", "nan", "n/a", "?", "null", "none"}


@dataclass
class Provenance:
    """Where a dataset came from and what cleaning did to it."""

    source: str
    log: list[str] = field(default_factory=list)
    rows_in: int = 0
    rows_out: int = 0
    cols_in: int = 0
    cols_out: int = 0

    def note(self, line: str) -> None:
        self.log.append(line)


@dataclass
class Dataset:
    """A cleaned two-class dataset: float features and labels in {-1, +1}."""

    name: str
    X: np.ndarray
    y: np.ndarray
    feature_names: list[str]
    provenance: Provenance

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.X.ndim != 2:
            raise InvalidInputError("X must be 2-D")
        if self.y.ndim != 1 or self.y.shape[0] != self.X.shape[0]:
            raise InvalidInputError("y must be 1-D with one label per row of X")
        if len(self.feature_names) != self.X.shape[1]:
            raise InvalidInputError("feature_names must match X columns")
        if not np.all(np.isfinite(self.X)):
            raise InvalidInputError("X contains non-finite entries")

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def class_counts(self) -> tuple[int, int]:
        """(negative count, positive count)."""
        return int(np.sum(self.y == -1.0)), int(np.sum(self.y == 1.0))


def _is_missing(cell: str) -> bool:
    return cell.strip().lower() in MISSING_TOKENS


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_manifest(path) -> dict:
    """Load a dataset manifest, resolving the data path against it."""
    p = Path(path)
    try:
        manifest = json.loads(p.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise IngestionError(f"cannot read manifest {p}: {e}") from e
    if not isinstance(manifest, dict):
        raise IngestionError(f"manifest {p} must be a JSON object")
    if "data" not in manifest:
        raise IngestionError(f"manifest {p} is missing the 'data' path")
    manifest = dict(manifest)
    manifest["data"] = str((p.parent / manifest["data"]).resolve())
    manifest.setdefault("name", p.stem)
    return manifest


def load_dataset(manifest) -> Dataset:
    """Read and clean the delimited file a manifest describes.

    ``manifest`` is a manifest dict (see :func:`read_manifest`) or a path
    to a manifest file.  Cleaning order: manifest-listed columns are
    dropped, then columns with non-numeric content, then rows with
    missing values or out-of-class labels.  Raises IngestionError, with
    the cleaning log attached, if the label column is absent, fewer than
    two distinct labels survive, or no rows survive.
    """
    if not isinstance(manifest, dict):
        manifest = read_manifest(manifest)
    name = str(manifest.get("name", "dataset"))
    data_path = Path(manifest["data"])
    delimiter = str(manifest.get("delimiter", ","))
    has_header = bool(manifest.get("has_header", True))
    pos_label = str(manifest.get("positive_label", "1"))
    neg_label = str(manifest.get("negative_label", "-1"))
    drop_cols = list(manifest.get("drop_columns", []))
    feature_range = manifest.get("feature_range")

    prov = Provenance(source=str(data_path))
    try:
        with open(data_path, newline="") as fh:
            rows = list(csv.reader(fh, delimiter=delimiter))
    except OSError as e:
        raise IngestionError(f"cannot read {data_path}: {e}") from e
    rows = [r for r in rows if r]
    if not rows:
        raise IngestionError(f"{data_path} is empty", prov.log)

    if has_header:
        header = [h.strip() for h in rows[0]]
        body = rows[1:]
    else:
        header = [f"col{i}" for i in range(len(rows[0]))]
        body = rows
    n_cols = len(header)
    prov.rows_in = len(body)
    prov.cols_in = n_cols

    bad = [r for r in body if len(r) != n_cols]
    if bad:
        raise IngestionError(
            f"{data_path}: {len(bad)} rows have a different field count "
            f"than the header ({n_cols})",
            prov.log,
        )

    def resolve(col) -> int:
        if isinstance(col, int):
            if not (0 <= col < n_cols):
                raise IngestionError(
                    f"column index {col} out of range for {n_cols} columns",
                    prov.log,
                )
            return col
        try:
            return header.index(str(col).strip())
        except ValueError:
            raise IngestionError(
                f"column '{col}' not found in header", prov.log
            ) from None

    if "label_column" not in manifest:
        raise IngestionError("manifest is missing 'label_column'", prov.log)
    label_idx = resolve(manifest["label_column"])

    keep = [i for i in range(n_cols) if i != label_idx]
    for col in drop_cols:
        i = resolve(col)
        if i == label_idx:
            raise IngestionError(
                f"cannot drop the label column '{header[i]}'", prov.log
            )
        if i in keep:
            keep.remove(i)
            prov.note(f"dropped column '{header[i]}' (listed in manifest)")

    # a column with any unparseable non-missing cell is non-numeric
    numeric_keep = []
    for i in keep:
        ok = True
        for r in body:
            cell = r[i]
            if _is_missing(cell):
                continue
            if not _is_number(cell):
                ok = False
                break
        if ok:
            numeric_keep.append(i)
        else:
            prov.note(f"dropped column '{header[i]}' (non-numeric content)")
    keep = numeric_keep

    if feature_range is not None:
        lo, hi = int(feature_range[0]), int(feature_range[1])
        if not (0 <= lo <= hi < len(keep)):
            raise IngestionError(
                f"feature_range [{lo}, {hi}] does not fit the "
                f"{len(keep)} remaining feature columns",
                prov.log,
            )
        for i in keep[:lo] + keep[hi + 1 :]:
            prov.note(f"dropped column '{header[i]}' (outside feature_range)")
        keep = keep[lo : hi + 1]

    if not keep:
        raise IngestionError("no feature columns survived cleaning", prov.log)

    X_rows: list[list[float]] = []
    y_vals: list[float] = []
    seen_raw_labels = set()
    for ridx, r in enumerate(body):
        raw_label = r[label_idx].strip()
        if _is_missing(raw_label):
            prov.note(f"dropped row {ridx} (missing label)")
            continue
        seen_raw_labels.add(raw_label)
        if raw_label == pos_label:
            label = 1.0
        elif raw_label == neg_label:
            label = -1.0
        else:
            prov.note(f"dropped row {ridx} (label '{raw_label}' not a target class)")
            continue
        missing_at = None
        for i in keep:
            if _is_missing(r[i]):
                missing_at = i
                break
        if missing_at is not None:
            prov.note(
                f"dropped row {ridx} (missing value in column "
                f"'{header[missing_at]}')"
            )
            continue
        X_rows.append([float(r[i]) for i in keep])
        y_vals.append(label)

    prov.rows_out = len(X_rows)
    prov.cols_out = len(keep)
    prov.note(
        f"kept {prov.rows_out}/{prov.rows_in} rows and "
        f"{prov.cols_out} feature columns from {prov.cols_in} raw columns"
    )

    if len({pos_label, neg_label} & seen_raw_labels) < 2:
        raise IngestionError(
            f"fewer than two target classes present (saw "
            f"{sorted(seen_raw_labels)[:8]}, wanted '{pos_label}' and "
            f"'{neg_label}')",
            prov.log,
        )
    if not X_rows:
        raise IngestionError("no rows survived cleaning", prov.log)

    X = np.asarray(X_rows, dtype=np.float64)
    y = np.asarray(y_vals, dtype=np.float64)
    if not np.all(np.isfinite(X)):
        raise IngestionError("parsed features contain non-finite values", prov.log)
    names = [header[i] for i in keep]
    return Dataset(name=name, X=X, y=y, feature_names=names, provenance=prov)


@dataclass(frozen=True)
class SplitSpec:
    """Fractions for the three-way calibration/prediction/validation split."""

    calibration: float = 0.49
    prediction: float = 0.30
    validation: float = 0.21

    def __post_init__(self):
        parts = (self.calibration, self.prediction, self.validation)
        if any(f <= 0.0 for f in parts):
            raise InvalidInputError("split fractions must be positive")
        if abs(sum(parts) - 1.0) > 1e-9:
            raise InvalidInputError(
                f"split fractions must sum to 1, got {sum(parts)!r}"
            )


def _apportion(class_counts: np.ndarray, part_sizes: np.ndarray) -> np.ndarray:
    """Integer class-by-part allocation close to proportional.

    Rows are classes, columns parts.  Row sums equal class counts and
    column sums equal part sizes.  Ideals are floored, then leftovers go
    to the cells with the largest fractional remainders among parts that
    still have room (ties broken by part order, then class order).
    """
    n = int(class_counts.sum())
    ideals = np.outer(class_counts, part_sizes) / n
    alloc = np.floor(ideals).astype(int)
    frac = ideals - alloc
    # leftover per class must land in parts that are still short
    for c in np.argsort(-class_counts, kind="stable"):
        short = int(class_counts[c] - alloc[c].sum())
        for _ in range(short):
            room = part_sizes - alloc.sum(axis=0)
            order = sorted(
                range(len(part_sizes)),
                key=lambda p: (-frac[c, p], p),
            )
            target = next((p for p in order if room[p] > 0), None)
            if target is None:
                raise StratificationError("cannot reconcile split sizes")
            alloc[c, target] += 1
            frac[c, target] = 0.0
    return alloc


def split_three_way(
    ds: Dataset, spec: SplitSpec | None = None, seed: int = 0
) -> tuple[Dataset, Dataset, Dataset]:
    """Random stratified split into calibration, prediction, validation.

    Part sizes are the floors of fraction * n with the remainder going
    to calibration.  Within each part the class mix tracks the overall
    mix to within one sample.  Every part must receive both classes,
    otherwise a StratificationError is raised.
    """
    if spec is None:
        spec = SplitSpec()
    n = ds.n_samples
    if n < 10:
        raise InvalidInputError(f"need at least 10 samples to split, got {n}")
    neg, pos = ds.class_counts()
    if neg + pos != n:
        raise InvalidInputError("labels must be -1 or +1 throughout")

    n_cal = int(np.floor(spec.calibration * n))
    n_pred = int(np.floor(spec.prediction * n))
    n_val = int(np.floor(spec.validation * n))
    n_cal += n - (n_cal + n_pred + n_val)
    sizes = np.array([n_cal, n_pred, n_val])

    counts = np.array([neg, pos])
    alloc = _apportion(counts, sizes)
    if np.any(alloc == 0):
        raise StratificationError(
            f"a split part would get zero samples of one class "
            f"(class counts {counts.tolist()}, part sizes {sizes.tolist()})"
        )

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    class_pools = [
        rng.permutation(np.flatnonzero(ds.y == c)) for c in (-1.0, 1.0)
    ]
    part_indices: list[list[np.ndarray]] = [[], [], []]
    for c in range(2):
        pool = class_pools[c]
        start = 0
        for p in range(3):
            take = alloc[c, p]
            part_indices[p].append(pool[start : start + take])
            start += take

    roles = ("calibration", "prediction", "validation")
    out = []
    for p, role in enumerate(roles):
        idx = np.sort(np.concatenate(part_indices[p]))
        prov = Provenance(
            source=ds.provenance.source,
            log=[f"{role} part of '{ds.name}' (seed {seed}, {idx.shape[0]} rows)"],
            rows_in=n,
            rows_out=idx.shape[0],
            cols_in=ds.n_features,
            cols_out=ds.n_features,
        )
        out.append(
            Dataset(
                name=f"{ds.name}/{role}",
                X=ds.X[idx],
                y=ds.y[idx],
                feature_names=list(ds.feature_names),
                provenance=prov,
            )
        )
    return out[0], out[1], out[2]


def derive_variant(
    ds: Dataset,
    n_total: int,
    pos_neg_ratio: float,
    seed: int = 0,
    replace: bool = False,
) -> Dataset:
    """Subsample a dataset to a chosen size and class ratio.

    ``pos_neg_ratio`` is positives per negative; the positive count is
    round(n_total * r / (1 + r)).  Sampling is without replacement
    unless ``replace`` is set, in which case classes may be oversampled
    beyond their availability.
    """
    if n_total < 2:
        raise InvalidInputError("n_total must be at least 2")
    if pos_neg_ratio <= 0.0 or not np.isfinite(pos_neg_ratio):
        raise InvalidInputError("pos_neg_ratio must be a positive finite number")
    n_pos = int(round(n_total * pos_neg_ratio / (1.0 + pos_neg_ratio)))
    n_neg = n_total - n_pos
    if n_pos < 1 or n_neg < 1:
        raise InvalidInputError(
            f"ratio {pos_neg_ratio} leaves a class empty at n_total={n_total}"
        )
    pools = {
        1.0: np.flatnonzero(ds.y == 1.0),
        -1.0: np.flatnonzero(ds.y == -1.0),
    }
    wanted = {1.0: n_pos, -1.0: n_neg}
    for c, m in wanted.items():
        if not replace and pools[c].shape[0] < m:
            raise InvalidInputError(
                f"class {c:+.0f} has {pools[c].shape[0]} samples, "
                f"cannot draw {m} without replacement"
            )
        if pools[c].shape[0] == 0:
            raise InvalidInputError(f"class {c:+.0f} is absent from '{ds.name}'")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    idx_neg = rng.choice(pools[-1.0], size=n_neg, replace=replace)
    idx_pos = rng.choice(pools[1.0], size=n_pos, replace=replace)
    idx = np.sort(np.concatenate([idx_neg, idx_pos]))
    prov = Provenance(
        source=ds.provenance.source,
        log=[
            f"variant of '{ds.name}': n={n_total}, pos:neg ratio "
            f"{pos_neg_ratio}, seed {seed}, replace={replace}"
        ],
        rows_in=ds.n_samples,
        rows_out=int(idx.shape[0]),
        cols_in=ds.n_features,
        cols_out=ds.n_features,
    )
    return Dataset(
        name=f"{ds.name}/variant",
        X=ds.X[idx],
        y=ds.y[idx],
        feature_names=list(ds.feature_names),
        provenance=prov,
    )
