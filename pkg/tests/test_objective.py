from fractions import Fraction

import numpy as np
import pytest

from scoresys.coefset import (CoefficientSet, Tier, bounded_integers,
                              explicit_values, uniform)
from scoresys.data import Dataset
from scoresys.errors import ConfigError
from scoresys.objective import (ObjectiveValue, TrainConfig, c0_range,
                                default_c1, default_weights, evaluate,
                                score_ints)

from helpers import rand_dataset


def _tiny():
    x = np.array([[1.0, 2.0], [1.0, -1.0], [1.0, 0.0]])
    y = np.array([1, -1, 1])
    return Dataset(x=x, y=y, feature_names=("(Intercept)", "f"),
                   intercept_index=0)


def test_config_fractions_and_validation():
    cfg = TrainConfig(c0=0.01, c1="0.001", w_pos=2, w_neg="0.5")
    assert cfg.c0 == Fraction(1, 100)
    assert cfg.c1 == Fraction(1, 1000)
    assert cfg.w_pos == 2 and cfg.w_neg == Fraction(1, 2)
    assert cfg.gamma == Fraction(1, 10)
    with pytest.raises(ConfigError):
        TrainConfig(c0=-0.1)
    with pytest.raises(ConfigError):
        TrainConfig(c0=0.1, w_pos=0)
    with pytest.raises(ConfigError):
        TrainConfig(c0=0.1, gamma=0)
    with pytest.raises(ConfigError):
        TrainConfig(c0=0.1, time_budget_s=0)
    with pytest.raises(ConfigError):
        TrainConfig(c0=0.1, gap_tolerance=1.0)


def test_config_allows_large_c0():
    # c0 above the meaningful range is legal; it just forces lam = 0
    cfg = TrainConfig(c0=1.5)
    assert cfg.c0 == Fraction(3, 2)


def test_resolve_fills_default_c1():
    s = uniform(bounded_integers(10), 2)  # max_l1 = 20
    cfg = TrainConfig(c0=Fraction(1, 100)).resolve(50, s)
    assert cfg.c1 == default_c1(50, Fraction(1, 100), Fraction(20))
    assert cfg.c1 == Fraction(1, 100) / 40


def test_resolve_rejects_meaningless_c1():
    s = uniform(bounded_integers(10), 2)
    with pytest.raises(ConfigError):
        TrainConfig(c0=Fraction(1, 100), c1=Fraction(1)).resolve(50, s)
    with pytest.raises(ConfigError):
        TrainConfig(c0=Fraction(1, 100), c1=Fraction(0)).resolve(50, s)


def test_c0_range():
    lo, hi = c0_range(200)
    assert lo == Fraction(1, 200) and hi == 1
    with pytest.raises(ConfigError):
        c0_range(0)


def test_default_c1_values():
    # half of min(1/n, c0) / max_l1
    assert default_c1(100, Fraction(1, 2), 10) == Fraction(1, 2000)
    assert default_c1(100, Fraction(1, 1000), 10) == Fraction(1, 20000)
    assert default_c1(10, Fraction(1, 2), 0) == 0
    with pytest.raises(ConfigError):
        default_c1(10, 0, 10)


def test_default_weights():
    w_pos, w_neg = default_weights(10, 2)
    assert w_pos == Fraction(10, 4) and w_neg == Fraction(10, 16)
    # all-zero model then loses exactly 1/2 per class
    with pytest.raises(ConfigError):
        default_weights(10, 0)
    with pytest.raises(ConfigError):
        default_weights(10, 10)


def test_score_ints_exact():
    d = _tiny()
    scores, den = score_ints(d, [Fraction(1, 2), Fraction(1)])
    assert den == 2
    assert scores.tolist() == [5, -1, 1]  # (0.5 + f) * 2


def test_evaluate_counts_zero_score_as_miss():
    d = _tiny()
    cfg = TrainConfig(c0=Fraction(1, 100), c1=Fraction(1, 1000))
    ov = evaluate(d, [0, 0], cfg)
    assert ov.misclassified_count == 3
    assert ov.loss_term == 1
    assert ov.nnz == 0 and ov.l0_term == 0 and ov.l1_term == 0
    assert ov.total == 1


def test_evaluate_terms():
    d = _tiny()
    cfg = TrainConfig(c0=Fraction(1, 100), c1=Fraction(1, 1000))
    # lam = (0, 1): scores 2, -1, 0 -> third example missed
    ov = evaluate(d, [0, 1], cfg)
    assert ov.misclassified_count == 1
    assert ov.loss_term == Fraction(1, 3)
    assert ov.l0_term == Fraction(1, 100)
    assert ov.l1_term == Fraction(1, 1000)
    assert ov.total == Fraction(1, 3) + Fraction(1, 100) + Fraction(1, 1000)
    assert ov.error_rate == Fraction(1, 3)
    assert ov.n == 3 and ov.tier_term == 0


def test_evaluate_weighted():
    d = _tiny()
    cfg = TrainConfig(c0=Fraction(1, 100), c1=Fraction(1, 1000),
                      w_pos=Fraction(2), w_neg=Fraction(1, 2))
    ov = evaluate(d, [0, 1], cfg)  # misses the third example, a positive
    assert ov.loss_term == Fraction(2, 3)
    ov2 = evaluate(d, [0, -1], cfg)  # scores -2, 1, 0: misses all three
    assert ov2.loss_term == Fraction(2 + 2 + Fraction(1, 2), 3)


def test_evaluate_tiers_add_to_penalties():
    d = _tiny()
    tier = (Tier(Fraction(1, 100), frozenset({Fraction(0)})),
            Tier(Fraction(4, 100), frozenset({Fraction(v) for v in
                                              (-10, -1, 1, 10)})))
    s = CoefficientSet(domains=(explicit_values([0, 1, -1, 10, -10]),) * 2,
                       tiers=(tier, tier))
    cfg = TrainConfig(c0=Fraction(1, 100), c1=Fraction(1, 1000))
    base = evaluate(d, [0, 1], cfg)
    ov = evaluate(d, [0, 1], cfg, tiers=s.tiers)
    assert ov.tier_term == Fraction(1, 100) + Fraction(4, 100)
    assert ov.total == base.total + ov.tier_term


def test_evaluate_rejects_shape_and_domainless_values():
    d = _tiny()
    cfg = TrainConfig(c0=Fraction(1, 100), c1=Fraction(1, 1000))
    with pytest.raises(ConfigError):
        evaluate(d, [1], cfg)


def test_mean_loss_equals_error_rate_when_unweighted():
    rng = np.random.default_rng(5)
    cfg = TrainConfig(c0=Fraction(1, 100), c1=Fraction(1, 10000))
    for _ in range(20):
        d = rand_dataset(rng, int(rng.integers(2, 20)), 2)
        lam = [int(rng.integers(-2, 3)), int(rng.integers(-2, 3))]
        ov = evaluate(d, lam, cfg)
        assert ov.loss_term == ov.error_rate
        assert ov.misclassified_count == sum(
            1 for i in range(d.n)
            if d.y[i] * (d.x[i] @ np.array(lam, dtype=float)) <= 0)


def test_objective_value_to_dict():
    d = _tiny()
    cfg = TrainConfig(c0=Fraction(1, 100), c1=Fraction(1, 1000))
    doc = evaluate(d, [0, 1], cfg).to_dict()
    assert doc["misclassified"] == 1
    assert doc["n"] == 3
    assert doc["total"] == pytest.approx(1 / 3 + 0.01 + 0.001)
    assert set(doc) >= {"total", "total_exact", "loss", "l0", "l1", "tier", "nnz"}
