"""Shared builders for the test suite: random instances, a vectorized
brute-force minimizer, and paths to the bundled benchmark tables."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from scoresys.coefset import (CoefficientSet, bounded_integers, digit_values,
                              explicit_values, signed_integers, uniform)
from scoresys.data import Dataset
from scoresys.exactnum import common_denominator
from scoresys.objective import TrainConfig, evaluate

DATA = Path(__file__).resolve().parent / "data"


def bench_path(name: str) -> Path:
    """Real UCI table when fetch_uci.py has run, bundled stand-in otherwise."""
    real = DATA / "uci" / name
    return real if real.exists() else DATA / name


def rand_dataset(rng, n, p, lo=-3, hi=3, intercept=False) -> Dataset:
    """Integer-cell dataset with both labels present."""
    x = rng.integers(lo, hi + 1, size=(n, p)).astype(np.float64)
    names = [f"f{j}" for j in range(p)]
    ii = None
    if intercept:
        x[:, 0] = 1.0
        names[0] = "(Intercept)"
        ii = 0
    y = rng.choice([-1, 1], size=n)
    y[0], y[-1] = 1, -1  # keep both classes
    return Dataset(x=x, y=y, feature_names=tuple(names), intercept_index=ii)


def rand_domain(rng, max_values=7):
    """One of the supported domain shapes, at most max_values values."""
    kind = int(rng.integers(0, 4))
    if kind == 0:
        m = int(rng.integers(1, (max_values - 1) // 2 + 1))
        return bounded_integers(m)
    if kind == 1:
        m = int(rng.integers(1, max_values))
        return signed_integers("pos" if rng.integers(0, 2) else "neg", m)
    if kind == 2:
        pool = [1, -1, 2, -2, 3, -3, 5, -5, Fraction(1, 2), Fraction(-1, 2)]
        take = int(rng.integers(1, max_values))
        picks = rng.choice(len(pool), size=take, replace=False)
        return explicit_values([0] + [pool[i] for i in picks])
    vals = sorted({0, 1, -1, 10, -10}, key=lambda v: (abs(v), v))
    return explicit_values(vals[:max_values])


def rand_coefset(rng, p, max_values=7) -> CoefficientSet:
    return CoefficientSet(domains=tuple(rand_domain(rng, max_values)
                                        for _ in range(p)))


def brute_solve(d: Dataset, s: CoefficientSet, cfg: TrainConfig):
    """Exhaustive minimum of the training objective over the lattice.

    Everything runs on a single common integer denominator so the
    200-instance oracle loop stays well under its time limit while the
    comparison itself is exact.  Returns (best_total, best_combo) with
    the (total, l1, values) tie-break.  Integer data cells only.
    """
    assert cfg.c1 is not None, "resolve the config first"
    dom_vals = [dom.values for dom in s.domains]
    den = common_denominator([v for vs in dom_vals for v in vs])
    combos = list(itertools.product(*dom_vals))
    cmat = np.array([[int(v * den) for v in c] for c in combos], dtype=np.int64)
    xs = d.x.astype(np.int64)
    assert np.array_equal(xs.astype(np.float64), d.x), "integer cells only"
    margins = (cmat @ xs.T) * d.y[np.newaxis, :].astype(np.int64)
    wden = common_denominator([cfg.w_pos, cfg.w_neg])
    wint = np.where(d.y > 0, int(cfg.w_pos * wden), int(cfg.w_neg * wden))
    loss_int = ((margins <= 0) * wint[np.newaxis, :]).sum(axis=1).tolist()

    # objective * scale is an integer for every combo
    scale = math.lcm(wden * d.n, cfg.c0.denominator, cfg.c1.denominator * den)
    tiers_flat = None
    if s.tiers is not None:
        costs = [s.tier_cost(j, v) for j, vs in enumerate(dom_vals) for v in vs]
        scale = math.lcm(scale, common_denominator(costs))
        tiers_flat = [{int(v * den): int(s.tier_cost(j, v) * scale)
                       for v in vs} for j, vs in enumerate(dom_vals)]
    m_loss = scale // (wden * d.n)
    m_l0 = int(cfg.c0 * scale)
    m_l1_num = cfg.c1.numerator * (scale // cfg.c1.denominator)
    assert m_l1_num % den == 0
    m_l1 = m_l1_num // den
    ks = (cmat != 0).sum(axis=1).tolist()
    l1s = np.abs(cmat).sum(axis=1).tolist()

    best = None
    for ci_, combo in enumerate(combos):
        tot = loss_int[ci_] * m_loss + ks[ci_] * m_l0 + l1s[ci_] * m_l1
        if tiers_flat is not None:
            tot += sum(tiers_flat[j][int(cmat[ci_, j])]
                       for j in range(len(combo)))
        key = (tot, l1s[ci_], combo)
        if best is None or key < best[0]:
            best = (key, combo)
    (tot, _, _), combo = best
    return Fraction(tot, scale), combo


def brute_check(d, s, cfg, tiers=None):
    """Slow cross-check of brute_solve through evaluate(); small K only."""
    best = None
    for combo in itertools.product(*[dom.values for dom in s.domains]):
        ov = evaluate(d, list(combo), cfg, tiers=tiers)
        key = (ov.total, sum(abs(v) for v in combo), combo)
        if best is None or key < best[0]:
            best = (key, combo, ov)
    return best[0][0], best[1]


def footnote_dataset() -> Dataset:
    """Two-point instance with two optimal unit-coefficient models."""
    x = np.array([[-1.0, 1.0], [1.0, -1.0]])
    y = np.array([1, -1])
    return Dataset(x=x, y=y, feature_names=("f0", "f1"), intercept_index=None)


def write_csv(path: Path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(str(v) for v in r) + "\n")
    return path
