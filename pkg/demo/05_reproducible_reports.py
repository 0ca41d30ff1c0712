"""
Deterministic experiment reports
================================

Run the same config twice through the command-line front end and diff the
bytes.  Float formatting is pinned to 17 significant digits and reduction
orders are fixed, so reports are reproducible down to the last bit.
"""

import tempfile
from pathlib import Path

from bdp.cli import main

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "quadratic_thm21.cfg"

with tempfile.TemporaryDirectory() as tmp:
    d1, d2 = Path(tmp) / "run1", Path(tmp) / "run2"
    for d in (d1, d2):
        code = main(["run", str(CONFIG), "--output-dir", str(d)])
        print("exit code:", code)

    for name in ("report.json", "steps.csv", "logratio.csv"):
        same = (d1 / name).read_bytes() == (d2 / name).read_bytes()
        print(f"{name}: {'identical' if same else 'DIFFERS'}")
