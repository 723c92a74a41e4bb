"""Materialize the benchmark corpus under data/.

Writes the bundled diagnostic table as CSV plus manifest, and
generates the three synthetic stand-in datasets.  Roughly 18 MB total,
so data/ stays out of version control; rerunning is deterministic.

Usage:  python3 scripts/make_datasets.py [out_dir]
"""

import sys
from pathlib import Path

from pmakit.prepare import materialize_all

out = Path(sys.argv[1]) if len(sys.argv) > 1 else \
    Path(__file__).resolve().parent.parent / "data"
for manifest in materialize_all(out):
    print(f"wrote {manifest}")
