"""Generalization gaps for finite coefficient classes.

Both bounds are Occam-style: with probability at least 1 - delta the
true error of a classifier picked from a finite set H exceeds its
training error by at most sqrt((ln|H'| - ln delta) / (2 n)).  The
finite-class form counts every coefficient vector (plus one); the
coprime form counts only vectors that are distinct as classifiers,
i.e. lattice directions lam/q with gcd(lam_1..lam_p, q) = 1, which is
a strictly smaller class for the same integer box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .coefset import CoefficientSet
from .errors import ConfigError


def _mobius_upto(m: int) -> list[int]:
    mu = [1] * (m + 1)
    primes = []
    is_comp = [False] * (m + 1)
    for i in range(2, m + 1):  # linear sieve
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > m:
                break
            is_comp[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


def farey_count(max_denominator: int, dim: int) -> int:
    """Number of points lam/q in [0,1)^dim with integer lam, denominator
    0 < q <= max_denominator, and gcd(lam_1, ..., lam_dim, q) = 1.

    Computed by Moebius inversion: sum over q of sum over e|q of
    mu(e) * (q/e)^dim.  Exact arbitrary-precision integer.
    """
    if max_denominator < 1 or dim < 1:
        raise ConfigError("max_denominator and dim must be >= 1")
    m = max_denominator
    mu = _mobius_upto(m)
    powers = [0] * (m + 1)
    for t in range(1, m + 1):
        powers[t] = t**dim
    total = 0
    for e in range(1, m + 1):  # regroup: sum_e mu(e) * sum_{t <= m/e} t^dim
        if mu[e] == 0:
            continue
        total += mu[e] * sum(powers[1 : m // e + 1])
    return total


@dataclass(frozen=True)
class BoundReport:
    kind: str  # "finite_class" | "coprime_class"
    hypothesis_count: int
    n: int
    delta: float
    bound_gap: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "hypothesis_count": self.hypothesis_count,
            "n": self.n,
            "delta": self.delta,
            "bound_gap": self.bound_gap,
        }


def _check_nd(n: int, delta: float):
    if n < 1:
        raise ConfigError("n must be >= 1")
    if not 0 < delta < 1:
        raise ConfigError("delta must be in (0, 1)")


def finite_class_gap(count_or_set, n: int, delta: float) -> BoundReport:
    """Gap sqrt((ln(|L| + 1) - ln delta) / (2 n)) for a coefficient
    lattice of |L| vectors; accepts the count or a CoefficientSet."""
    _check_nd(n, delta)
    if isinstance(count_or_set, CoefficientSet):
        count = count_or_set.count()
    else:
        count = int(count_or_set)
    if count < 1:
        raise ConfigError("hypothesis count must be >= 1")
    gap = math.sqrt((math.log(count + 1) - math.log(delta)) / (2 * n))
    return BoundReport("finite_class", count, n, float(delta), gap)


def coprime_class_gap(max_coef: int, p: int, n: int, delta: float) -> BoundReport:
    """Gap sqrt((ln C - ln delta) / (2 n)) where C counts the coprime
    lattice directions reachable with integer coefficients bounded by
    max_coef in p dimensions."""
    _check_nd(n, delta)
    count = farey_count(max_coef, p)
    gap = math.sqrt((math.log(count) - math.log(delta)) / (2 * n))
    return BoundReport("coprime_class", count, n, float(delta), gap)
