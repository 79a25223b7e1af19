"""Command line entry point: ``hypercolor <subcommand>`` or ``python -m hypercolor``.

Exit status: 0 success, 1 usage error, 2 validation failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict

import numpy as np

from . import fileio
from .coloring import greedy_color, greedy_independent_set, pipeline_chi_upper
from .harness import (
    ExperimentConfig,
    derive_seed,
    log_grid,
    oracle_suite,
    records_to_csv,
    run_experiment,
    theory_csv,
    theory_table,
    validate_loops,
    validate_qk,
    validate_uniformity,
)
from .hypergraph import is_proper
from .sampler import sample_binomial, sample_regular, sample_regular_simple, sample_uniform_m
from .theory import theory_report

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text, path=None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    raise TypeError(type(o))


def _dumps(obj):
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def cmd_theory(args):
    if args.sweep:
        dmin, dmax, steps = args.sweep
        reports, d0 = theory_table(args.r, args.eps, log_grid(dmin, dmax, int(steps)))
        _emit(theory_csv(reports), args.out)
        print(f"# empirical d0 = {d0}", file=sys.stderr)
    else:
        rep = theory_report(args.r, args.d, args.eps)
        _emit(_dumps({k: (None if isinstance(v, float) and math.isnan(v) else v)
                      for k, v in rep.as_dict().items()}), args.out)
    return EXIT_OK


def cmd_sample(args):
    rng = np.random.default_rng(args.seed)
    diag = None
    if args.model == "regular":
        if args.d is None:
            raise SystemExit("--d is required for the regular model")
        sampler = sample_regular_simple if args.simple else sample_regular
        h, diag, _ = sampler(args.n, args.d, args.r, rng)
    elif args.model == "binomial":
        if args.p is None:
            raise SystemExit("--p is required for the binomial model")
        h = sample_binomial(args.n, args.p, args.r, rng)
    else:
        if args.m is None:
            raise SystemExit("--m is required for the uniform-m model")
        h = sample_uniform_m(args.n, args.m, args.r, rng)
    _emit(fileio.format_hypergraph(h), args.out)
    if args.diagnostics:
        if diag is None:
            raise SystemExit("--diagnostics only applies to the regular model")
        _emit(_dumps(asdict(diag)), args.diagnostics)
    return EXIT_OK


def cmd_color(args):
    h = fileio.read_hypergraph(args.input)
    rng = np.random.default_rng(args.seed)
    col = greedy_color(h, order=args.order, rng=rng)
    if args.out:
        fileio.write_coloring(col, args.out)
    info = {"n": h.n, "m": h.m, "colors": col.num_colors_used(), "proper": is_proper(h, col)}
    if args.alpha:
        info["alpha_greedy"] = len(greedy_independent_set(h, rng))
    sys.stdout.write(_dumps(info))
    return EXIT_OK


def cmd_pipeline(args):
    results = []
    for t in range(args.trials):
        seed = derive_seed(args.seed, t)
        res = pipeline_chi_upper(args.n, args.d, args.r, args.eps, np.random.default_rng(seed))
        results.append({"trial": t, "seed": seed, **res.summary()})
    ok = [x for x in results if x["status"] == "ok"]
    summary = {
        "trials": len(results),
        "ok": len(ok),
        "repair_failed": sum(x["status"] == "repair_failed" for x in results),
        "all_proper": all(x["proper"] for x in ok),
    }
    _emit(_dumps({"results": results, "summary": summary}), args.json)
    return EXIT_OK


def cmd_validate(args):
    if args.what == "qk":
        rep = validate_qk(args.max_r, args.max_a)
        for r, a, k, got, want in rep.mismatches:
            print(f"MISMATCH r={r} a={a} k={k}: enumerated {got}, formula {want}")
        print(f"qk: {len(rep.checked)} (r,a) pairs checked, {len(rep.mismatches)} mismatches, "
              f"skipped {rep.skipped}")
        ok = rep.passed
    elif args.what == "uniformity":
        reports = validate_uniformity(args.n, args.d, args.r, args.samples, seed=args.seed)
        for rep in reports:
            print(f"uniformity[{rep.mode}]: cells={rep.cells} chi2={rep.statistic:.3f} "
                  f"p={rep.pvalue:.4g} {'PASS' if rep.passed else 'FAIL'}")
        ok = all(rep.passed for rep in reports)
    else:
        rep = validate_loops(args.n, args.d, args.r, args.trials, seed=args.seed)
        print(f"loops: mean={rep.mean_loops:.3f} expected={rep.expected_loops:.3f} "
              f"rel_err={rep.rel_error:.3f} multi_total={rep.multi_total} "
              f"{'PASS' if rep.passed else 'FAIL'}")
        ok = rep.passed
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_experiment(args):
    overrides = {k: getattr(args, k) for k in
                 ("r", "d", "n", "eps", "trials", "master_seed", "model", "workers")}
    overrides["csv_path"] = args.csv
    overrides["json_path"] = args.json
    if args.record_runtime:
        overrides["record_runtime"] = True
    if args.config:
        cfg = ExperimentConfig.from_json(args.config, **overrides)
    else:
        cfg = ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    records, summary = run_experiment(cfg)
    if not cfg.csv_path:
        sys.stdout.write(records_to_csv(records))
    print(_dumps(summary), file=sys.stderr, end="")
    return EXIT_OK


def cmd_oracle(args):
    rep = oracle_suite(seed=args.seed, cases=args.cases, n=args.n, r=args.r, p=args.p)
    for f in rep.failures:
        print(f"FAIL {f}")
    print(f"oracle: {rep.cases} cases, {rep.checks} checks, {len(rep.failures)} failures")
    return EXIT_OK if rep.passed else EXIT_VALIDATION


def build_parser():
    p = _Parser(prog="hypercolor", description="Random regular hypergraph coloring workbench.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("theory", help="closed-form predictions and the first-moment condition")
    t.add_argument("--r", type=int, default=3)
    t.add_argument("--d", type=float, default=100.0)
    t.add_argument("--eps", type=float, default=0.1)
    t.add_argument("--sweep", type=float, nargs=3, metavar=("DMIN", "DMAX", "STEPS"))
    t.add_argument("--out")
    t.set_defaults(func=cmd_theory)

    s = sub.add_parser("sample", help="draw a random hypergraph")
    s.add_argument("--model", choices=("regular", "binomial", "uniform-m"), default="regular")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int)
    s.add_argument("--r", type=int, default=3)
    s.add_argument("--p", type=float)
    s.add_argument("--m", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--simple", action="store_true", help="resample until loop- and multi-edge-free")
    s.add_argument("--out")
    s.add_argument("--diagnostics")
    s.set_defaults(func=cmd_sample)

    c = sub.add_parser("color", help="greedy-color a hypergraph file")
    c.add_argument("input")
    c.add_argument("--order", choices=("random", "degree"), default="random")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--alpha", action="store_true", help="also report a greedy independent set size")
    c.add_argument("--out")
    c.set_defaults(func=cmd_color)

    pl = sub.add_parser("pipeline", help="sample-and-color pipeline with repair")
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--d", type=int, required=True)
    pl.add_argument("--r", type=int, default=3)
    pl.add_argument("--eps", type=float, default=0.2)
    pl.add_argument("--trials", type=int, default=1)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--json")
    pl.set_defaults(func=cmd_pipeline)

    v = sub.add_parser("validate", help="statistical and exact self-checks")
    vs = v.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = vs.add_parser("qk")
    q.add_argument("--max-r", type=int, default=4)
    q.add_argument("--max-a", type=int, default=3)
    u = vs.add_parser("uniformity")
    u.add_argument("--n", type=int, default=2)
    u.add_argument("--d", type=int, default=3)
    u.add_argument("--r", type=int, default=3)
    u.add_argument("--samples", type=int, default=100_000)
    u.add_argument("--seed", type=int, default=0)
    lo = vs.add_parser("loops")
    lo.add_argument("--n", type=int, default=100_000)
    lo.add_argument("--d", type=int, default=50)
    lo.add_argument("--r", type=int, default=3)
    lo.add_argument("--trials", type=int, default=200)
    lo.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("experiment", help="seeded multi-trial experiment with CSV/JSON output")
    e.add_argument("--config", help="JSON file with ExperimentConfig fields; flags override it")
    e.add_argument("--r", type=int)
    e.add_argument("--d", type=int)
    e.add_argument("--n", type=int)
    e.add_argument("--eps", type=float)
    e.add_argument("--trials", type=int)
    e.add_argument("--seed", dest="master_seed", type=int)
    e.add_argument("--model", choices=("regular", "binomial", "uniform-m"))
    e.add_argument("--workers", type=int)
    e.add_argument("--csv")
    e.add_argument("--json")
    e.add_argument("--record-runtime", action="store_true",
                   help="fill runtime_ms (makes the CSV differ between runs)")
    e.set_defaults(func=cmd_experiment)

    o = sub.add_parser("oracle", help="greedy heuristics vs exact solvers on tiny instances")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--cases", type=int, default=200)
    o.add_argument("--n", type=int, default=8)
    o.add_argument("--r", type=int, default=3)
    o.add_argument("--p", type=float, default=0.25)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"hypercolor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(f"hypercolor: error: {exc.code}", file=sys.stderr)
            return EXIT_USAGE
        raise


if __name__ == "__main__":
    sys.exit(main())
