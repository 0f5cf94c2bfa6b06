"""Exact minimization of the scoring objective by branch and bound.

The search fixes coefficients one at a time (most class-separating
column first, small |value| first) and keeps exact integer margins for
every example, pruning with an admissible bound: penalties already
committed, the least penalty each remaining coefficient must add, and
the loss of examples no completion can rescue.  Objective ties resolve
to the smallest l1 norm, then to the lexicographically smallest
coefficient vector; pruning is careful to respect that rule, so the
returned vector is a pure function of the problem and not of traversal
order or worker count.  A time budget makes the solver anytime: the
incumbent is always a feasible model and the reported lower bound
never exceeds it.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coefset import CoefficientSet
from .data import Dataset
from .errors import ConfigError, DomainError, ScoresysError
from .exactnum import to_fraction
from .objective import CompiledInstance, ObjectiveValue, TrainConfig, evaluate
from .report import ScoringSystem

INF = float("inf")
CHECK_EVERY = 512          # nodes between clock reads
TRACE_EVERY_S = 0.05       # min spacing of periodic trace points
GAP_EPS = Fraction(1, 10**9)

OPTIMAL = "optimal"
BUDGET = "feasible_budget_exhausted"


@dataclass(frozen=True)
class TracePoint:
    elapsed_s: float
    incumbent_objective: float
    incumbent_nnz: int
    lower_bound: float

    def csv_line(self) -> str:
        return (f"{self.elapsed_s:.6f},{self.incumbent_objective!r},"
                f"{self.lower_bound!r},{self.incumbent_nnz}")


@dataclass(frozen=True)
class SolveResult:
    best: ScoringSystem
    objective: ObjectiveValue
    lower_bound: Fraction
    gap: float
    status: str                      # OPTIMAL or BUDGET
    trace: tuple[TracePoint, ...]
    nodes_explored: int


def _class_mean_diffs(d: Dataset) -> list[Fraction]:
    """Exact mean(x_j | y=+1) - mean(x_j | y=-1) per column; 0 when a
    class is absent."""
    pos = d.y == 1
    n_pos = int(pos.sum())
    n_neg = d.n - n_pos
    out = []
    for j in range(d.p):
        nums, den = d.exact_column(j)
        if n_pos == 0 or n_neg == 0:
            out.append(Fraction(0))
            continue
        mp = Fraction(int(nums[pos].sum()), den * n_pos)
        mn = Fraction(int(nums[~pos].sum()), den * n_neg)
        out.append(mp - mn)
    return out


def _snap(dom, target: Fraction) -> Fraction:
    """Nearest domain value; ties prefer small |v|, then small v."""
    return min(dom.values, key=lambda v: (abs(v - target), abs(v), v))


def warm_start(d: Dataset, s: CoefficientSet) -> tuple[Fraction, ...]:
    """Feasible starting vector: per-column class-mean differences,
    rescaled so the largest lands on its domain's largest magnitude,
    then each coordinate snapped to the nearest domain value.  Columns
    that do not separate the classes (constants included) snap to 0.
    """
    if s.p != d.p:
        raise ConfigError(f"coefficient set has {s.p} domains for {d.p} columns")
    diffs = _class_mean_diffs(d)
    scale = max((abs(u) for u in diffs), default=Fraction(0))
    if scale == 0:
        return tuple(Fraction(0) for _ in range(d.p))
    out = []
    for j, u in enumerate(diffs):
        target = u / scale * s.domains[j].max_abs
        out.append(_snap(s.domains[j], target))
    return tuple(out)


# --- public bound over partial assignments -----------------------------------

@dataclass(frozen=True, eq=False)
class SearchState:
    """Partial coefficient assignment over a compiled instance; None
    marks an undecided coordinate."""

    instance: CompiledInstance
    values: tuple

    def __post_init__(self):
        ci = self.instance
        vals = tuple(None if v is None else to_fraction(v) for v in self.values)
        if len(vals) != ci.p:
            raise ConfigError(f"{len(vals)} entries for {ci.p} coefficients")
        for j, v in enumerate(vals):
            if v is not None and v not in ci.s.domains[j]:
                raise DomainError(f"value {v} not in the domain of coefficient {j}")
        object.__setattr__(self, "values", vals)

    def margin_intervals(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-example [lo, hi] of y_i x_i . lam over all completions,
        at margin_den scale.  Any completion's margin lies inside."""
        ci = self.instance
        lo = np.zeros(ci.n, dtype=object)
        hi = np.zeros(ci.n, dtype=object)
        for j, v in enumerate(self.values):
            if v is None:
                a, b = ci.margin_extrema(j)
                lo, hi = lo + a, hi + b
            else:
                contrib = ci.b_cols[j] * ci.vi[j][ci.values[j].index(v)]
                lo, hi = lo + contrib, hi + contrib
        return lo, hi


def lower_bound_of(state: SearchState, cfg: TrainConfig) -> Fraction:
    """Admissible bound: penalties of the fixed coordinates plus the
    weighted loss of examples whose whole margin interval is <= 0.  No
    completion of the state can cost less; a fully fixed state gives
    evaluate()'s total exactly."""
    ci = state.instance
    if cfg != ci.cfg:
        raise ConfigError("state was compiled under a different config")
    fixed_pen = 0
    for j, v in enumerate(state.values):
        if v is not None:
            fixed_pen += int(ci.pen[j][ci.values[j].index(v)])
    _, hi = state.margin_intervals()
    sure_loss = int(ci.cost[np.asarray(hi <= 0, dtype=bool)].sum())
    return Fraction(fixed_pen + sure_loss, ci.pen_den)


# --- engine internals ---------------------------------------------------------

class _Prep:
    """Instance arrays reindexed into search order, plus suffix tables."""

    def __init__(self, ci: CompiledInstance):
        self.ci = ci
        self.p, self.n = ci.p, ci.n
        diffs = _class_mean_diffs(ci.d)
        self.order = sorted(range(ci.p), key=lambda j: (-abs(diffs[j]), j))
        self.costs = ci.cost
        self.B, self.VI, self.PEN, self.L1, self.KIDX = [], [], [], [], []
        mx = []
        for t, j in enumerate(self.order):
            vals = ci.values[j]
            pidx = sorted(range(len(vals)), key=lambda k: (abs(vals[k]), vals[k]))
            self.B.append(ci.b_cols[j])
            self.VI.append(ci.vi[j][pidx])
            self.PEN.append(ci.pen[j][pidx])
            self.L1.append(ci.l1i[j][pidx])
            self.KIDX.append([int(k) for k in pidx])
            mx.append(ci.margin_extrema(j)[1])
        dtype = np.int64 if ci.int64_ok else object
        self.zeros_margin = np.zeros(ci.n, dtype=dtype)
        self.sufmax = [None] * (ci.p + 1)
        self.sufmax[ci.p] = np.zeros(ci.n, dtype=dtype)
        self.sufminpen = [0] * (ci.p + 1)
        self.sufzeropen = [0] * (ci.p + 1)
        for t in range(ci.p - 1, -1, -1):
            self.sufmax[t] = self.sufmax[t + 1] + mx[t]
            self.sufminpen[t] = self.sufminpen[t + 1] + int(self.PEN[t].min())
            self.sufzeropen[t] = self.sufzeropen[t + 1] + int(self.PEN[t][0])
        total = sum(len(v) for v in self.VI) * ci.n
        self.OUT = None
        if ci.int64_ok and total <= 30_000_000:
            self.OUT = [v[:, None] * b[None, :] for v, b in zip(self.VI, self.B)]

    def level_out(self, t: int) -> np.ndarray:
        if self.OUT is not None:
            return self.OUT[t]
        return self.VI[t][:, None] * self.B[t][None, :]

    def root_bound(self) -> int:
        dead = np.asarray(self.sufmax[0] <= 0, dtype=bool)
        return self.sufminpen[0] + int(self.costs[dead].sum())


class _Shared:
    """Cross-worker incumbent, lower-bound floor, stop flags, trace."""

    def __init__(self, prep: _Prep, cfg: TrainConfig, t0: float, sink):
        self.prep = prep
        self.pen_den = prep.ci.pen_den
        self.tol = to_fraction(cfg.gap_tolerance)
        self.t0 = t0
        self.deadline = None
        if cfg.time_budget_s is not None:
            self.deadline = t0 + cfg.time_budget_s
        self.sink = sink
        self.lock = threading.Lock()
        self.best = None           # (obj_int, l1_int, korig tuple, nnz)
        self.stop = False
        self.lb_floor = prep.root_bound()
        self.trace: list[TracePoint] = []
        self.last_emit = -INF
        self.tasks = {}            # task id -> bound, while unfinished

    def _emit(self, now: float):
        obj, nnz = self.best[0], self.best[3]
        pt = TracePoint(
            elapsed_s=now - self.t0,
            incumbent_objective=float(Fraction(obj, self.pen_den)),
            incumbent_nnz=nnz,
            lower_bound=float(Fraction(self.lb_floor, self.pen_den)))
        self.trace.append(pt)
        self.last_emit = now
        if self.sink is not None:
            line = pt.csv_line() + "\n"
            self.sink(line) if callable(self.sink) else self.sink.write(line)

    def consider(self, obj: int, l1: int, korig: tuple, nnz: int) -> bool:
        cur = self.best
        if cur is not None and (obj, l1, korig) >= cur[:3]:
            return False
        with self.lock:
            cur = self.best
            if cur is not None and (obj, l1, korig) >= cur[:3]:
                return False
            self.best = (obj, l1, korig, nnz)
            self._emit(time.monotonic())
            return True

    def heartbeat(self, lb_candidate):
        """Clock check plus monotone lower-bound bookkeeping; called
        every few hundred nodes by each worker."""
        now = time.monotonic()
        if self.deadline is not None and now >= self.deadline:
            self.stop = True
        with self.lock:
            if lb_candidate > self.lb_floor:
                # an infinite candidate means every open subtree was
                # pruned against the incumbent, which then is the bound
                cand = (self.best[0] if lb_candidate == INF
                        else min(int(lb_candidate), self.best[0]))
                self.lb_floor = max(self.lb_floor, cand)
            if self.tol > 0:
                obj = Fraction(self.best[0], self.pen_den)
                gap = obj - Fraction(self.lb_floor, self.pen_den)
                if gap <= self.tol * max(obj, GAP_EPS):
                    self.stop = True
            if now - self.last_emit >= TRACE_EVERY_S:
                self._emit(now)

    def task_lb(self) -> float:
        return min(self.tasks.values(), default=INF)


class _Engine:
    """One worker's depth-first search over a subtree."""

    def __init__(self, prep: _Prep, sh: _Shared, parallel: bool):
        self.prep = prep
        self.sh = sh
        self.parallel = parallel
        self.nodes = 0
        self.next_check = CHECK_EVERY
        self.open_min = [INF] * (prep.p + 1)
        self.active = [INF] * (prep.p + 2)

    def _korig(self, prefix: list) -> tuple:
        pr = self.prep
        k = list(pr.ci.zero_index)
        for t, kk in enumerate(prefix):
            k[pr.order[t]] = pr.KIDX[t][kk]
        return tuple(k)

    def _nnz(self, korig: tuple) -> int:
        zi = self.prep.ci.zero_index
        return sum(1 for j, k in enumerate(korig) if k != zi[j])

    def consider(self, obj: int, l1: int, prefix: list):
        cur = self.sh.best
        if cur is not None:
            if obj > cur[0] or (obj == cur[0] and l1 > cur[1]):
                return
        korig = self._korig(prefix)
        self.sh.consider(int(obj), int(l1), korig, self._nnz(korig))

    def _checkpoint(self, t: int):
        if self.parallel:
            lb = self.sh.task_lb()
        else:
            lb = min(min(self.open_min[:t], default=INF), self.active[t])
        self.sh.heartbeat(lb)

    def dfs(self, t: int, margin, fpen: int, fl1: int, prefix: list):
        sh = self.sh
        self.nodes += 1
        if self.nodes >= self.next_check:
            self.next_check = self.nodes + CHECK_EVERY
            self._checkpoint(t)
        if sh.stop:
            return
        pr = self.prep
        costs = pr.costs
        cand = margin[None, :] + pr.level_out(t)
        pens = pr.PEN[t]
        l1s = pr.L1[t]
        last = t == pr.p - 1
        if last:
            bounds = fpen + pens + ((cand <= 0) * costs[None, :]).sum(axis=1)
        else:
            dead = (cand + pr.sufmax[t + 1][None, :]) <= 0
            bounds = (fpen + pens + pr.sufminpen[t + 1]
                      + (dead * costs[None, :]).sum(axis=1))
        sm = np.minimum.accumulate(bounds[::-1])[::-1]
        om, ac = self.open_min, self.active
        width = len(pens)
        for k in range(width):
            om[t] = int(sm[k + 1]) if k + 1 < width else INF
            if sh.stop:
                break
            bk = int(bounds[k])
            if last:
                self.nodes += 1
                self.consider(bk, fl1 + int(l1s[k]), prefix + [k])
                continue
            cur = sh.best
            if cur is not None:
                if bk > cur[0]:
                    continue
                if bk == cur[0]:
                    l1k = fl1 + int(l1s[k])
                    if l1k > cur[1]:
                        continue
                    if l1k == cur[1]:
                        # the only completion that can still tie the
                        # incumbent on (objective, l1) is all-zeros
                        zloss = int(((cand[k] <= 0) * costs).sum())
                        zobj = fpen + int(pens[k]) + pr.sufzeropen[t + 1] + zloss
                        self.consider(zobj, l1k, prefix + [k])
                        continue
            ac[t + 1] = bk
            self.dfs(t + 1, cand[k], fpen + int(pens[k]),
                     fl1 + int(l1s[k]), prefix + [k])
            ac[t + 1] = INF
        om[t] = INF


def _evaluate_assign(prep: _Prep, assign: list) -> tuple[int, int]:
    margin = prep.zeros_margin.copy()
    obj = 0
    l1 = 0
    for t, k in enumerate(assign):
        margin = margin + prep.VI[t][k] * prep.B[t]
        obj += int(prep.PEN[t][k])
        l1 += int(prep.L1[t][k])
    obj += int(((margin <= 0) * prep.costs).sum())
    return obj, l1


def _polish(prep: _Prep, assign: list) -> list:
    """Coordinate descent over the compiled arrays; deterministic and
    strictly improving on (objective, then value-preference indexes),
    so it terminates.  Used only to seed the incumbent."""
    assign = list(assign)
    margin = prep.zeros_margin.copy()
    for t, k in enumerate(assign):
        margin = margin + prep.VI[t][k] * prep.B[t]
    for _ in range(60):
        changed = False
        for t in range(prep.p):
            base = margin - prep.VI[t][assign[t]] * prep.B[t]
            cand = base[None, :] + prep.level_out(t)
            tot = prep.PEN[t] + ((cand <= 0) * prep.costs[None, :]).sum(axis=1)
            k_best = min(range(len(tot)), key=lambda k: (int(tot[k]), k))
            if (int(tot[k_best]), k_best) < (int(tot[assign[t]]), assign[t]):
                assign[t] = k_best
                margin = base + prep.VI[t][k_best] * prep.B[t]
                changed = True
        if not changed:
            break
    return assign


def _seed_incumbent(prep: _Prep, sh: _Shared, eng: _Engine, warm):
    ci = prep.ci
    pos_of = []
    for t in range(prep.p):
        inv = {dk: k for k, dk in enumerate(prep.KIDX[t])}
        pos_of.append(inv)
    starts = [[0] * prep.p]
    if warm is not None:
        w = []
        for t in range(prep.p):
            j = prep.order[t]
            v = _snap(ci.s.domains[j], to_fraction(warm[j]))
            w.append(pos_of[t][ci.values[j].index(v)])
        starts.append(w)
        starts.append(_polish(prep, w))
        # sparse truncations escape local minima the dense start gets
        # stuck in (coordinate descent can then move late-ordered
        # coefficients such as the intercept)
        mags = []
        for t in range(prep.p):
            j = prep.order[t]
            mags.append(abs(ci.values[j][prep.KIDX[t][w[t]]]))
        ranked = sorted(range(prep.p), key=lambda t: (-mags[t], t))
        for keep_k in (1, 2, 3, 4, 6, 8):
            if keep_k >= prep.p:
                break
            keep = set(ranked[:keep_k])
            trunc = [w[t] if t in keep else 0 for t in range(prep.p)]
            starts.append(_polish(prep, trunc))
    starts.append(_polish(prep, [0] * prep.p))
    # bias-only seeds: a small value on the weakest-separation level
    # (a constant intercept column always sorts last) against an
    # otherwise zero vector; descent then grows the strong
    # coefficients, which truncation alone cannot do when partial
    # scores sit exactly at zero
    t_bias = prep.p - 1
    if ci.d.intercept_index is not None:
        t_bias = prep.order.index(ci.d.intercept_index)
    for k in range(1, min(9, len(prep.KIDX[t_bias]))):
        start = [0] * prep.p
        start[t_bias] = k
        starts.append(_polish(prep, start))
    for a in starts:
        obj, l1 = _evaluate_assign(prep, a)
        eng.consider(obj, l1, a)


def solve(d: Dataset, s: CoefficientSet, cfg: TrainConfig, *,
          jobs: int = 1, warm=None, trace_sink=None) -> SolveResult:
    """Minimize the objective exactly over the coefficient set.

    Returns the optimum with status "optimal" when the tree is
    exhausted (or closed within cfg.gap_tolerance); if cfg.time_budget_s
    runs out first, returns the best incumbent with status
    "feasible_budget_exhausted" and a valid lower bound.  jobs > 1
    splits the root subtrees over threads; the returned model is
    identical for any worker count whenever the search completes.
    warm overrides the built-in warm start (it is snapped into the
    domains).
    """
    if d.n < 1:
        raise ConfigError("dataset is empty")
    cfg = cfg.resolve(d.n, s)
    jobs = max(1, int(jobs))
    t0 = time.monotonic()
    ci = CompiledInstance(d, s, cfg)
    prep = _Prep(ci)
    sh = _Shared(prep, cfg, t0, trace_sink)
    eng = _Engine(prep, sh, parallel=jobs > 1)
    if warm is None:
        warm = warm_start(d, s)
    elif len(tuple(warm)) != d.p:
        raise ConfigError(f"warm start has {len(tuple(warm))} entries for {d.p} "
                          "coefficients")
    _seed_incumbent(prep, sh, eng, warm)
    with sh.lock:
        sh._emit(time.monotonic())

    if jobs == 1:
        eng.active[0] = prep.root_bound()
        eng.dfs(0, prep.zeros_margin, 0, 0, [])
        nodes = eng.nodes
    else:
        nodes = _run_parallel(prep, sh, jobs) + eng.nodes

    best = sh.best
    if best is None:
        raise ScoresysError("internal: search ended with no incumbent")
    obj_int, _, korig, _ = best
    exhausted = not sh.stop
    lb_int = obj_int if exhausted else min(sh.lb_floor, obj_int)
    lower = Fraction(lb_int, ci.pen_den)
    total = Fraction(obj_int, ci.pen_den)
    gap_frac = (total - lower) / max(total, GAP_EPS)
    status = OPTIMAL if gap_frac <= sh.tol else BUDGET
    with sh.lock:
        sh.lb_floor = lb_int
        sh._emit(time.monotonic())

    lam = tuple(ci.values[j][korig[j]] for j in range(ci.p))
    objective = evaluate(d, lam, cfg, tiers=s.tiers)
    if objective.total != total:
        raise ScoresysError("internal: search objective does not match evaluate()")
    ranges = tuple(
        None if j == d.intercept_index
        else (float(d.x[:, j].min()), float(d.x[:, j].max()))
        for j in range(d.p))
    model = ScoringSystem(
        coefficients=lam,
        feature_names=tuple(d.feature_names),
        intercept_index=d.intercept_index,
        feature_ranges=ranges,
        provenance={
            "config_hash": cfg.content_hash(),
            "dataset_hash": d.content_hash(),
            "status": status,
        })
    return SolveResult(
        best=model, objective=objective, lower_bound=lower,
        gap=float(gap_frac), status=status, trace=tuple(sh.trace),
        nodes_explored=nodes)


def _run_parallel(prep: _Prep, sh: _Shared, jobs: int) -> int:
    """Split the root's children into tasks consumed by a thread pool.
    Workers share the incumbent; the task list doubles as the global
    lower bound while subtrees are in flight."""
    costs = prep.costs
    cand = prep.zeros_margin[None, :] + prep.level_out(0)
    if prep.p == 1:
        bounds = prep.PEN[0] + ((cand <= 0) * costs[None, :]).sum(axis=1)
    else:
        dead = (cand + prep.sufmax[1][None, :]) <= 0
        bounds = prep.PEN[0] + prep.sufminpen[1] + (dead * costs[None, :]).sum(axis=1)
    width = len(prep.PEN[0])
    queue = deque(range(width))
    sh.tasks = {k: int(bounds[k]) for k in range(width)}
    counts = []

    def worker():
        eng = _Engine(prep, sh, parallel=True)
        while True:
            with sh.lock:
                if not queue or sh.stop:
                    break
                k = queue.popleft()
            try:
                _run_task(prep, sh, eng, k, cand[k], int(bounds[k]))
            finally:
                with sh.lock:
                    sh.tasks.pop(k, None)
        counts.append(eng.nodes)

    threads = [threading.Thread(target=worker, name=f"solve-{i}")
               for i in range(jobs)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    if sh.stop:
        sh.tasks = {}
    return sum(counts) + 1


def _run_task(prep: _Prep, sh: _Shared, eng: _Engine, k: int, margin, bk: int):
    fpen = int(prep.PEN[0][k])
    fl1 = int(prep.L1[0][k])
    if prep.p == 1:
        eng.nodes += 1
        eng.consider(bk, fl1, [k])
        return
    cur = sh.best
    if cur is not None:
        if bk > cur[0]:
            return
        if bk == cur[0]:
            if fl1 > cur[1]:
                return
            if fl1 == cur[1]:
                zloss = int(((margin <= 0) * prep.costs).sum())
                eng.consider(fpen + prep.sufzeropen[1] + zloss, fl1, [k])
                return
    eng.dfs(1, margin, fpen, fl1, [k])
