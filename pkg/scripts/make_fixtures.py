#!/usr/bin/env python3
"""Generate the two bundled benchmark stand-ins.

The real UCI tables cannot ship with the repository, so this script
builds synthetic datasets calibrated to the published summary numbers
the tests rely on:

breastcancer.csv: 699 rows, 9 integer cytology features in 1..10, 16
rows with a missing BareNuclei cell (written as "?") so the standard
drop policy leaves 683 rows with 444 negative / 239 positive labels.
The reference model ClumpThickness + UniformityOfCellShape +
BareNuclei - 10 misclassifies exactly 25 of the 683 kept rows (3.66%,
published train error 3.7%).

mammo.csv: 961 rows of one-hot mass descriptors (4 shape, 5 margin,
2 density indicators), 516 negative / 445 positive.  The reference
model 1 - 2*OvalShape - 2*CircumscribedMargin errs on exactly 200 rows
(20.81%, published 20.8%).

Deterministic: fixed seed, stable row order.  Run from anywhere; files
land next to this script in ../tests/data/.
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"

BC_FEATURES = [
    "ClumpThickness", "UniformityOfCellSize", "UniformityOfCellShape",
    "MarginalAdhesion", "SingleEpithelialCellSize", "BareNuclei",
    "BlandChromatin", "NormalNucleoli", "Mitoses",
]
BC_MODEL = ("ClumpThickness", "UniformityOfCellShape", "BareNuclei")


def _clip(v, lo=1, hi=10):
    return max(lo, min(hi, v))


def _triple_with_sum(rng, total_lo, total_hi):
    """Three values in 1..10 whose sum lands in [total_lo, total_hi]."""
    while True:
        a = rng.randint(1, 10)
        b = rng.randint(1, 10)
        c = rng.randint(1, 10)
        if total_lo <= a + b + c <= total_hi:
            return a, b, c


def _bc_row(rng, label, as_error):
    """Feature dict for one kept row.  The reference rule scores
    ClumpThickness + UniformityOfCellShape + BareNuclei - 10; a score
    of exactly 0 counts as a miss, so correct negatives stay <= 9."""
    if label == -1:
        ct, shape, bn = (_triple_with_sum(rng, 11, 16) if as_error
                         else _triple_with_sum(rng, 3, 9))
        base = lambda: _clip(rng.randint(1, 4) + rng.randint(0, 2), 1, 10)
    else:
        ct, shape, bn = (_triple_with_sum(rng, 5, 10) if as_error
                         else _triple_with_sum(rng, 11, 28))
        base = lambda: _clip(rng.randint(3, 9) + rng.randint(0, 2), 1, 10)
    row = {name: base() for name in BC_FEATURES}
    row["ClumpThickness"] = ct
    row["UniformityOfCellShape"] = shape
    row["BareNuclei"] = bn
    # cell size tracks cell shape closely, as in the real table
    row["UniformityOfCellSize"] = _clip(shape + rng.choice([-1, 0, 0, 1]))
    row["Mitoses"] = _clip(rng.randint(1, 3) if label == -1 else rng.randint(1, 8))
    return row


def make_breastcancer(rng):
    rows = []
    plan = ([(-1, False)] * (444 - 12) + [(-1, True)] * 12
            + [(1, False)] * (239 - 13) + [(1, True)] * 13)
    for label, as_error in plan:
        row = _bc_row(rng, label, as_error)
        rows.append((row, label, None))
    # rows dropped for the missing BareNuclei cell; labels mostly negative
    for i in range(16):
        label = -1 if i < 14 else 1
        row = _bc_row(rng, label, False)
        rows.append((row, label, "?"))
    rng.shuffle(rows)

    kept_errors = 0
    kept = {-1: 0, 1: 0}
    for row, label, missing in rows:
        if missing is not None:
            continue
        kept[label] += 1
        score = sum(row[f] for f in BC_MODEL) - 10
        kept_errors += label * score <= 0
    assert kept == {-1: 444, 1: 239}, kept
    assert kept_errors == 25, kept_errors

    path = OUT_DIR / "breastcancer.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(BC_FEATURES + ["class"])
        for row, label, missing in rows:
            cells = [row[f] for f in BC_FEATURES]
            if missing is not None:
                cells[BC_FEATURES.index("BareNuclei")] = missing
            w.writerow(cells + [label])
    return path


SHAPES = ["RoundShape", "OvalShape", "LobularShape", "IrregularShape"]
MARGINS = ["CircumscribedMargin", "MicrolobulatedMargin", "ObscuredMargin",
           "IllDefinedMargin", "SpiculatedMargin"]
DENSITIES = ["LowDensity", "HighDensity"]
MAMMO_FEATURES = SHAPES + MARGINS + DENSITIES


def _mammo_row(rng, shape, margin, density_high):
    row = {name: 0 for name in MAMMO_FEATURES}
    row[shape] = 1
    row[margin] = 1
    row["HighDensity" if density_high else "LowDensity"] = 1
    return row


def _benign_looking(rng):
    """Shape/margin pair with OvalShape or CircumscribedMargin set."""
    if rng.random() < 0.55:
        return "OvalShape", rng.choice(MARGINS)
    return (rng.choice(["RoundShape", "LobularShape"]),
            "CircumscribedMargin")


def _malignant_looking(rng):
    """Neither OvalShape nor CircumscribedMargin."""
    shape = rng.choices(["IrregularShape", "LobularShape", "RoundShape"],
                        weights=[6, 3, 1])[0]
    margin = rng.choices(MARGINS[1:], weights=[1, 2, 4, 5])[0]
    return shape, margin


def make_mammo(rng):
    rows = []
    plan = ([(-1, False)] * (516 - 115) + [(-1, True)] * 115
            + [(1, False)] * (445 - 85) + [(1, True)] * 85)
    for label, as_error in plan:
        looks_benign = (label == -1) != as_error
        shape, margin = (_benign_looking(rng) if looks_benign
                         else _malignant_looking(rng))
        density_high = rng.random() < (0.35 if label == -1 else 0.6)
        rows.append((_mammo_row(rng, shape, margin, density_high), label))
    rng.shuffle(rows)

    errors = 0
    counts = {-1: 0, 1: 0}
    for row, label in rows:
        counts[label] += 1
        score = 1 - 2 * row["OvalShape"] - 2 * row["CircumscribedMargin"]
        errors += label * score <= 0
    assert counts == {-1: 516, 1: 445}, counts
    assert errors == 200, errors

    path = OUT_DIR / "mammo.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(MAMMO_FEATURES + ["Severity"])
        for row, label in rows:
            w.writerow([row[f] for f in MAMMO_FEATURES] + [label])
    return path


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20120601)
    bc = make_breastcancer(rng)
    mam = make_mammo(rng)
    print(f"wrote {bc}")
    print(f"wrote {mam}")


if __name__ == "__main__":
    main()
