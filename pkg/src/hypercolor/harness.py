"""Seeded experiments, statistical validation and reporting.

Per-trial seeds are ``SeedSequence([master_seed, trial]).generate_state(1, uint64)``
masked to 63 bits, so a trial's randomness depends only on the master seed and
its index, never on scheduling.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.stats

from .coloring import (
    greedy_color,
    greedy_independent_set,
    pipeline_chi_upper,
    repair,
)
from .hypergraph import Coloring, Hypergraph, find_bad_edges, is_independent, is_proper
from .oracles import exact_alpha, exact_chromatic
from .sampler import (
    PointSystem,
    augment_step,
    initial_edge_count,
    sample_binomial,
    sample_multi,
    sample_regular,
    sample_uniform_m,
    strip,
    to_hypergraph,
    trim,
)
from .theory import (
    REPORT_FIELDS,
    empirical_d0,
    predicted_alpha_frac,
    predicted_chi,
    qk_distribution,
    theory_sweep,
)

MODELS = ("regular", "binomial", "uniform-m")
STATUSES = ("ok", "repair_failed", "invalid")
CSV_HEADER = (
    "trial", "seed", "n", "r", "d", "eps", "M", "colors_initial", "bad_edges", "u", "delta",
    "colors_final", "alpha_greedy", "chi_pred", "alpha_pred", "ratio_chi", "ratio_alpha",
    "runtime_ms", "status",
)
CHI2_THRESHOLD = 1e-3
MAX_WALK_POINTS = 16


def derive_seed(master_seed, trial):
    state = np.random.SeedSequence([int(master_seed), int(trial)]).generate_state(1, dtype=np.uint64)
    return int(state[0]) & (2**63 - 1)


@dataclass
class ExperimentConfig:
    r: int = 3
    d: int = 100
    n: int = 20001
    eps: float = 0.2
    trials: int = 5
    master_seed: int = 0
    model: str = "regular"
    workers: int = 1
    csv_path: str | None = None
    json_path: str | None = None
    record_runtime: bool = False

    def validate(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.model == "regular" and (self.n * self.d) % self.r:
            raise ValueError(f"r={self.r} must divide n*d={self.n * self.d} for the regular model")
        if self.d <= 1:
            raise ValueError("d must exceed 1 for the predictions to be defined")
        return self

    @classmethod
    def from_json(cls, path, **overrides):
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


@dataclass
class ExperimentRecord:
    trial: int
    seed: int
    n: int
    r: int
    d: int
    eps: float
    M: int | None = None
    colors_initial: int | None = None
    bad_edges: int | None = None
    u: int | None = None
    delta: int | None = None
    colors_final: int | None = None
    alpha_greedy: int | None = None
    chi_pred: float | None = None
    alpha_pred: float | None = None
    ratio_chi: float | None = None
    ratio_alpha: float | None = None
    runtime_ms: float | None = None
    status: str = "invalid"


def run_trial(cfg, trial):
    seed = derive_seed(cfg.master_seed, trial)
    rng = np.random.default_rng(seed)
    rec = ExperimentRecord(trial, seed, cfg.n, cfg.r, cfg.d, cfg.eps)
    rec.chi_pred = predicted_chi(cfg.r, cfg.d)
    rec.alpha_pred = predicted_alpha_frac(cfg.r, cfg.d) * cfg.n
    t0 = time.perf_counter()
    try:
        if cfg.model == "regular":
            res = pipeline_chi_upper(cfg.n, cfg.d, cfg.r, cfg.eps, rng)
            h = res.hypergraph
            rec.M, rec.colors_initial, rec.bad_edges = res.M, res.colors_initial, res.bad_edges
            rec.u, rec.delta, rec.colors_final, rec.status = res.u, res.delta, res.colors_final, res.status
        else:
            if cfg.model == "binomial":
                p = min(1.0, cfg.d / math.comb(cfg.n - 1, cfg.r - 1))
                h = sample_binomial(cfg.n, p, cfg.r, rng)
            else:
                h = sample_uniform_m(cfg.n, round(cfg.n * cfg.d / cfg.r), cfg.r, rng)
            col = greedy_color(h, rng=rng)
            rec.M = h.m
            rec.colors_initial = rec.colors_final = col.num_colors_used()
            rec.bad_edges = rec.u = rec.delta = 0
            rec.status = "ok"
        rec.alpha_greedy = len(greedy_independent_set(h, rng))
    except ValueError:
        rec.status = "invalid"
    if rec.colors_final is not None:
        rec.ratio_chi = rec.colors_final / rec.chi_pred
    if rec.alpha_greedy is not None:
        rec.ratio_alpha = rec.alpha_greedy / rec.alpha_pred
    if cfg.record_runtime:
        rec.runtime_ms = round((time.perf_counter() - t0) * 1000, 3)
    return rec


def _run_trial_star(args):
    return run_trial(*args)


def summarize(records):
    out = {"trials": len(records), "status": dict(Counter(r.status for r in records))}
    for key in ("ratio_chi", "ratio_alpha"):
        vals = [getattr(r, key) for r in records if getattr(r, key) is not None]
        if vals:
            out[key] = {"mean": float(np.mean(vals)), "min": min(vals), "max": max(vals)}
        else:
            out[key] = None
    return out


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow([_fmt(getattr(rec, k)) for k in CSV_HEADER])
    return buf.getvalue()


def records_to_json(records, summary):
    return json.dumps({"records": [asdict(r) for r in records], "summary": summary}, indent=2, sort_keys=True)


def run_experiment(cfg):
    """Run ``cfg.trials`` independent trials; records come back in trial order."""
    cfg.validate()
    jobs = [(cfg, t) for t in range(cfg.trials)]
    if cfg.workers == 1:
        records = [run_trial(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_run_trial_star, jobs))
    summary = summarize(records)
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            fh.write(records_to_csv(records))
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            fh.write(records_to_json(records, summary))
    return records, summary


# -- exact meeting-count validation -----------------------------------------------


def enumerate_partitions(points, r):
    """Every partition of ``points`` into blocks of size r (canonical order:
    each block is opened by the smallest point not yet placed)."""
    points = tuple(points)
    if not points:
        yield ()
        return
    if len(points) % r:
        raise ValueError("point count not divisible by r")
    first, rest = points[0], points[1:]
    for comp in itertools.combinations(rest, r - 1):
        chosen = set(comp)
        remaining = tuple(p for p in rest if p not in chosen)
        for tail in enumerate_partitions(remaining, r):
            yield ((first,) + comp,) + tail


def meeting_count_frequencies(r, a):
    """Exact frequencies of 'Q meets k parts' over all partitions of r(a+1) points.

    Q is the r smallest point ids.  The walk places the smallest unplaced point
    first, so every part touching Q is fixed within the first few levels; once
    Q is covered the number of ways to finish is the leaf count of the same
    walk on the leftover points, tallied once per leftover size.
    """
    points = tuple(range(r * (a + 1)))
    q = frozenset(range(r))

    @lru_cache(maxsize=None)
    def leaves(size):
        if size == 0:
            return 1
        return math.comb(size - 1, r - 1) * leaves(size - r)

    tally = Counter()

    def walk(remaining, met):
        if not q.intersection(remaining):
            tally[met] += leaves(len(remaining))
            return
        first, rest = remaining[0], remaining[1:]
        q_left = q.intersection(rest)
        finish = leaves(len(rest) - (r - 1))
        for comp in itertools.combinations(rest, r - 1):
            if q_left.issubset(comp):
                # this part covers the rest of Q: every completion is a leaf
                tally[met + 1] += finish
                continue
            chosen = set(comp)
            walk(tuple(p for p in rest if p not in chosen), met + 1)

    walk(points, 0)
    total = sum(tally.values())
    return {k: Fraction(c, total) for k, c in sorted(tally.items())}


@dataclass
class QkReport:
    checked: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (r, a) too large to walk explicitly

    @property
    def passed(self):
        return not self.mismatches


def validate_qk(max_r, max_a, min_r=2):
    if max_r > 5 or max_a > 4:
        raise ValueError("enumeration guard: need max_r <= 5 and max_a <= 4")
    report = QkReport()
    for r in range(min_r, max_r + 1):
        for a in range(0, max_a + 1):
            if r * (a + 1) > MAX_WALK_POINTS:
                report.skipped.append((r, a))
                continue
            freq = meeting_count_frequencies(r, a)
            dist = qk_distribution(r, a)
            for k in range(1, r + 1):
                if freq.get(k, Fraction(0)) != dist.q(k):
                    report.mismatches.append((r, a, k, freq.get(k, Fraction(0)), dist.q(k)))
            report.checked.append((r, a))
    return report


# -- uniformity of the augmentation ------------------------------------------------


@dataclass
class UniformityReport:
    mode: str
    cells: int
    samples: int
    statistic: float
    pvalue: float
    threshold: float = CHI2_THRESHOLD

    @property
    def passed(self):
        return self.cells == 1 or self.pvalue > self.threshold


def _chi2_report(mode, counts, universe, samples):
    unexpected = set(counts) - set(universe)
    if unexpected:
        raise AssertionError(f"{len(unexpected)} sampled partitions are not valid partitions")
    if len(universe) == 1:
        return UniformityReport(mode, 1, samples, 0.0, 1.0)
    obs = np.array([counts.get(p, 0) for p in universe], dtype=float)
    stat, pval = scipy.stats.chisquare(obs)
    return UniformityReport(mode, len(universe), samples, float(stat), float(pval))


def _partition_universe(num_points, r):
    return [frozenset(frozenset(b) for b in p) for p in enumerate_partitions(range(num_points), r)]


def validate_uniformity(n, d, r, samples, seed=0, modes=("pipeline", "single-step")):
    """Chi-square of final partitions against the uniform law on all partitions.

    ``pipeline``: ``sample_regular`` with m forced to 0.  ``single-step``: one
    ``augment_step`` from a uniformly drawn partition of the first nd - r
    points (with one part, that start is fixed).
    """
    if (n * d) % r:
        raise ValueError(f"r={r} must divide n*d")
    total = n * d
    if total > 8:
        raise ValueError("enumeration guard: at most 8 points")
    universe = _partition_universe(total, r)
    rng = np.random.default_rng(seed)
    reports = []
    if "pipeline" in modes:
        counts = Counter()
        for _ in range(samples):
            _, _, ps = sample_regular(n, d, r, rng, m=0)
            counts[ps.canonical_partition()] += 1
        reports.append(_chi2_report("pipeline", counts, universe, samples))
    if "single-step" in modes:
        counts = Counter()
        start_pts = total - r
        # buckets of the starting points: fill buckets in id order up to d
        phi = [i // d for i in range(start_pts)]
        rank = [i % d + 1 for i in range(start_pts)]
        for _ in range(samples):
            parts = rng.permutation(start_pts).reshape(-1, r)
            ps = PointSystem(n, r, phi, rank, parts, [False] * start_pts)
            out = augment_step(ps, d, rng)
            counts[out.canonical_partition()] += 1
        reports.append(_chi2_report("single-step", counts, universe, samples))
    return reports


# -- strip statistics -----------------------------------------------------------------


@dataclass
class LoopReport:
    n: int
    d: int
    r: int
    m: int
    trials: int
    mean_loops: float
    expected_loops: float
    multi_total: int
    tolerance: float = 0.15
    max_multi: int = 3

    @property
    def rel_error(self):
        return abs(self.mean_loops - self.expected_loops) / self.expected_loops

    @property
    def passed(self):
        return self.rel_error <= self.tolerance and self.multi_total <= self.max_multi


def validate_loops(n, d, r, trials, seed=0):
    """Removed loops per H*_r(n, m) against the first-order estimate m C(r,2) / n."""
    m = initial_edge_count(n, d, r)
    rng = np.random.default_rng(seed)
    loops = []
    multi = 0
    for _ in range(trials):
        _, lo, mu = strip(to_hypergraph(sample_multi(n, m, r, rng)))
        loops.append(lo)
        multi += mu
    expected = m * math.comb(r, 2) / n
    return LoopReport(n, d, r, m, trials, float(np.mean(loops)), expected, multi)


# -- theory table -----------------------------------------------------------------------


def log_grid(dmin, dmax, steps):
    return [float(x) for x in np.geomspace(dmin, dmax, steps)]


def theory_table(r, eps, d_grid):
    """Rows of the theory sweep plus the smallest grid d certified from there on."""
    if any(d <= 1 for d in d_grid):
        raise ValueError("grid values must exceed 1")
    reports = theory_sweep(r, eps, d_grid)
    return reports, empirical_d0(reports)


def theory_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_FIELDS)
    for rep in reports:
        w.writerow([_fmt(getattr(rep, k)) for k in REPORT_FIELDS])
    return buf.getvalue()


# -- oracle suite -------------------------------------------------------------------------


def _complete_hypergraph(n, r):
    return Hypergraph.from_edges(r, n, itertools.combinations(range(n), r))


def inject_bad_edges(h, col, rng, count=2):
    """Force up to ``count`` random edges monochromatic by copying one endpoint's color."""
    colors = col.colors.copy()
    if h.m:
        for e in rng.choice(h.m, size=min(count, h.m), replace=False):
            colors[h.edges[e]] = colors[h.edges[e][0]]
    return Coloring(colors, palette_size=col.palette_size)


@dataclass
class OracleReport:
    cases: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures


def oracle_suite(seed=0, cases=200, n=8, r=3, p=0.25):
    """Greedy heuristics against exact solvers on tiny random instances."""
    rng = np.random.default_rng(seed)
    rep = OracleReport()

    def check(ok, what):
        rep.checks += 1
        if not ok:
            rep.failures.append(what)

    for name, h in (("edgeless", Hypergraph(r, n, np.empty((0, r)))), ("K4_3", _complete_hypergraph(4, 3))):
        chi = exact_chromatic(h)
        col = greedy_color(h, rng=rng)
        check(chi <= col.num_colors_used() and is_proper(h, col), f"{name}: chromatic")
        check(name != "edgeless" or (chi == 1 and col.num_colors_used() == 1), f"{name}: edgeless values")
        check(name != "K4_3" or chi == 2, f"{name}: exact value")

    for case in range(cases):
        h = sample_binomial(n, p, r, rng)
        col = greedy_color(h, rng=rng)
        chi = exact_chromatic(h)
        check(is_proper(h, col), f"case {case}: greedy improper")
        check(col.num_colors_used() >= chi, f"case {case}: greedy {col.num_colors_used()} < chi {chi}")
        ind = greedy_independent_set(h, rng)
        alpha = exact_alpha(h)
        check(is_independent(h, ind), f"case {case}: greedy set not independent")
        check(len(ind) <= alpha, f"case {case}: greedy set {len(ind)} > alpha {alpha}")

        hurt = inject_bad_edges(h, col, rng, count=int(rng.integers(1, 4)))
        bad = find_bad_edges(h, hurt)
        fixed = repair(h, hurt, bad, delta=h.n)
        check(is_proper(h, fixed), f"case {case}: repair left a monochromatic edge")

        s1 = strip(h)[0]
        check(strip(s1)[0] == s1, f"case {case}: strip not idempotent")
        ps = sample_multi(n, int(rng.integers(0, 6)), r, rng)
        t1 = trim(ps, 2)
        check(np.array_equal(trim(t1, 2).parts, t1.parts), f"case {case}: trim not idempotent")
        rep.cases += 1
    return rep
