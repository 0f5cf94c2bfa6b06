#!/usr/bin/env python3
"""Download the two real UCI tables and prepare them for the tests.

Writes tests/data/uci/breastcancer.csv and tests/data/uci/mammo.csv
with the same column layout as the bundled synthetic stand-ins; when
these files exist the benchmark tests pick them up automatically.

breastcancer: Wisconsin original (breast-cancer-wisconsin.data).  The
sample id column is dropped, the 9 cytology features keep their 1..10
integer coding, missing BareNuclei cells stay as "?" so the loader's
drop policy applies, and the 2/4 outcome coding becomes -1/+1.

mammo: mammographic_masses.data.  BI-RADS is dropped (non-predictive
assessment), Age is dropped to match the indicator-only reference
model, and Shape/Margin/Density become one-hot indicator columns named
like the bundled fixture; rows with any missing field are dropped here
because one-hot expansion has no sensible imputation.

Needs outbound network access; the test sandbox does not have it,
which is why the synthetic stand-ins exist.
"""

from __future__ import annotations

import csv
import io
import sys
import urllib.request
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "data" / "uci"

BC_URL = ("https://archive.ics.uci.edu/ml/machine-learning-databases/"
          "breast-cancer-wisconsin/breast-cancer-wisconsin.data")
MAMMO_URL = ("https://archive.ics.uci.edu/ml/machine-learning-databases/"
             "mammographic-masses/mammographic_masses.data")

BC_FEATURES = [
    "ClumpThickness", "UniformityOfCellSize", "UniformityOfCellShape",
    "MarginalAdhesion", "SingleEpithelialCellSize", "BareNuclei",
    "BlandChromatin", "NormalNucleoli", "Mitoses",
]

SHAPES = ["RoundShape", "OvalShape", "LobularShape", "IrregularShape"]
MARGINS = ["CircumscribedMargin", "MicrolobulatedMargin", "ObscuredMargin",
           "IllDefinedMargin", "SpiculatedMargin"]
DENSITIES = ["LowDensity", "HighDensity"]


def _get(url: str) -> list[list[str]]:
    with urllib.request.urlopen(url, timeout=60) as resp:
        text = resp.read().decode("utf-8")
    rows = []
    for line in io.StringIO(text):
        line = line.strip()
        if line:
            rows.append(line.split(","))
    return rows


def fetch_breastcancer() -> int:
    rows = _get(BC_URL)
    out = OUT_DIR / "breastcancer.csv"
    n = 0
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BC_FEATURES + ["Malignant"])
        for r in rows:
            if len(r) != 11:
                continue
            feats = r[1:10]
            label = {"2": "-1", "4": "1"}[r[10]]
            w.writerow(feats + [label])
            n += 1
    print(f"wrote {out} ({n} rows)")
    return n


def _onehot(names: list[str], code: str, lo: int) -> list[str] | None:
    # codes are 1-based (shape/margin) or collapsed to low/high (density)
    try:
        k = int(code) - lo
    except ValueError:
        return None
    if not 0 <= k < len(names):
        return None
    return ["1" if i == k else "0" for i in range(len(names))]


def fetch_mammo() -> int:
    rows = _get(MAMMO_URL)
    out = OUT_DIR / "mammo.csv"
    n = 0
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SHAPES + MARGINS + DENSITIES + ["Severity"])
        for r in rows:
            if len(r) != 6:
                continue
            shape = _onehot(SHAPES, r[2], 1)
            margin = _onehot(MARGINS, r[3], 1)
            # density 1-3 = low (fatty through heterogeneously dense),
            # 4 = high, per the reference model's two-way split
            dens = None
            if r[4].isdigit():
                dens = (["1", "0"] if int(r[4]) <= 3 else ["0", "1"]
                        ) if 1 <= int(r[4]) <= 4 else None
            if shape is None or margin is None or dens is None:
                continue
            label = {"0": "-1", "1": "1"}.get(r[5])
            if label is None:
                continue
            w.writerow(shape + margin + dens + [label])
            n += 1
    print(f"wrote {out} ({n} rows)")
    return n


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    try:
        fetch_breastcancer()
        fetch_mammo()
    except OSError as e:
        print(f"download failed: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
