"""Run the full 20-repeat benchmark on the breast dataset and print
the accuracy tables.

Needs the dataset files under data/.  Generate them once with:

    python3 scripts/make_datasets.py

Run:  python3 demos/04_benchmark_run.py
"""

import sys
from pathlib import Path

from pmakit import ExperimentConfig, emit_results, run_experiment

manifest = Path(__file__).resolve().parent.parent / "data" / "breast.json"
if not manifest.exists():
    sys.exit("data/breast.json not found; run scripts/make_datasets.py first")

cfg = ExperimentConfig(datasets=(str(manifest),))
result = run_experiment(cfg)

failed = sum(1 for r in result.runs if r.error is not None)
print(f"{len(result.runs)} runs, {failed} failed\n")
print(f"{'method':>12s}  {'train':>7s}  {'test':>7s}")
for method in cfg.methods:
    train = result.aggregates[("breast", method, "train")]["mean"]
    test = result.aggregates[("breast", method, "test")]["mean"]
    print(f"{method:>12s}  {train:7.4f}  {test:7.4f}")

out = Path("results-demo")
paths = emit_results(result, out)
print(f"\nwrote {len(paths)} files to {out}/")
print("view them with:  python3 -m pmakit show --out results-demo")
