"""Batch command-line front end.

Every command is reproducible from the config record it emits: the seed is
taken from --seed, then the POLYAPPROX_SEED environment variable, then
fresh entropy (and printed).  JSON is the canonical output; curve and
harness commands also write CSV and render a PNG figure next to it when
--out is given.

Exit codes: 0 success, 2 bad input, 3 internal estimator failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from functools import partial
from math import pi

import numpy as np

from . import constants as _constants
from . import corpus as _corpus
from . import deviations as _dev
from . import measures as _meas
from . import optimize as _opt
from . import randpoly as _rand
from .bodies import (Ball, Cap, Ellipsoid, Polytope, box_polytope, convex_hull,
                     make_regular_polygon, make_triangle_T)
from .errors import GeometryError
from .rng import fresh_seed

BODY_GRAMMAR = """\
body descriptors (kind:params):
  ball[:r]                   ball of radius r (default 1), centered
  cube[:a]                   [0, a]^n (default a = 1)
  sym-cube[:a]               [-a, a]^n (default a = 1)
  ellipsoid:a1,a2,...        axis-aligned, centered, one semi-axis per dim
  cap:eps[:+|-]              D_n cut at x_n >= eps (or <= -eps)
  regular-polygon:N[:inscribed|circumscribed]   (dim 2)
  triangle:h                 regular triangle, circumradius 1 + h (dim 2)
  simplex                    conv{0, e_1, ..., e_n}
  random-poly:N:seed         hull of N uniform points on S^{n-1}
"""


def parse_body(desc: str, n: int):
    parts = desc.split(":")
    kind = parts[0]
    try:
        if kind == "ball":
            return Ball(n, float(parts[1]) if len(parts) > 1 else 1.0)
        if kind == "cube":
            a = float(parts[1]) if len(parts) > 1 else 1.0
            return box_polytope(np.zeros(n), np.full(n, a))
        if kind == "sym-cube":
            a = float(parts[1]) if len(parts) > 1 else 1.0
            return box_polytope(np.full(n, -a), np.full(n, a))
        if kind == "ellipsoid":
            axes = [float(v) for v in parts[1].split(",")]
            if len(axes) != n:
                raise ValueError("ellipsoid needs one semi-axis per dimension")
            return Ellipsoid(axes)
        if kind == "cap":
            sign = -1 if len(parts) > 2 and parts[2] == "-" else +1
            return Cap(n, float(parts[1]), sign)
        if kind == "regular-polygon":
            if n != 2:
                raise ValueError("regular-polygon needs --dim 2")
            nv = int(parts[1])
            mode = parts[2] if len(parts) > 2 else "inscribed"
            if mode == "inscribed":
                return make_regular_polygon(nv)
            if mode == "circumscribed":
                from .bodies import circumscribed_polygon
                return circumscribed_polygon(nv)
            raise ValueError("polygon mode must be inscribed or circumscribed")
        if kind == "triangle":
            if n != 2:
                raise ValueError("triangle needs --dim 2")
            return make_triangle_T(float(parts[1]))
        if kind == "simplex":
            pts = np.vstack([np.zeros(n), np.eye(n)])
            return convex_hull(pts)
        if kind == "random-poly":
            nv, seed = int(parts[1]), int(parts[2])
            return _rand.random_inscribed(Ball(n), nv, seed=seed)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad body descriptor {desc!r}: {exc}") from None
    raise ValueError(f"unknown body kind {kind!r}")


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("POLYAPPROX_SEED")
    if env is not None:
        return int(env)
    seed = fresh_seed()
    print(f"seed drawn from entropy: {seed}", file=sys.stderr)
    return seed


def _config(args, **extra) -> dict:
    cfg = {"command": args.command, "seed": args.seed}
    for key in ("dim", "j", "q", "body", "other", "N", "trials", "samples",
                "threads", "out"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg.update({k: v for k, v in extra.items() if v is not None})
    return cfg


def _emit(record, args) -> None:
    text = json.dumps(record, sort_keys=True)
    print(text)
    if getattr(args, "out", None) and not getattr(args, "_files_written", False):
        with open(args.out + ".json", "w") as fh:
            fh.write(text + "\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# -- commands ---------------------------------------------------------------------

def cmd_constants(args) -> int:
    args.seed = args.seed if args.seed is not None else 0
    if args.suite:
        records = _constants.appendix_b_suite(args.nmax)
        payload = {"config": _config(args, nmax=args.nmax),
                   "records": [r.to_dict() for r in records],
                   "failures": [r.to_dict() for r in _constants.suite_findings(records)],
                   "all_failures_expected": _constants.findings_all_expected(records)}
        if args.out:
            _write_csv(args.out + ".csv", ["inequality", "n", "ok", "margin"],
                       [(r.name, r.n, r.ok, r.margin) for r in records])
            with open(args.out + ".json", "w") as fh:
                json.dump(payload, fh, sort_keys=True)
            args._files_written = True
        print(json.dumps({k: payload[k] for k in ("config", "failures", "all_failures_expected")},
                         sort_keys=True))
        return 0
    n = args.dim or 3
    table = {
        "alpha": {j: _constants.alpha(n, j) for j in range(1, n + 1)},
        "beta": {j: _constants.beta(n, j) for j in range(1, n + 1)},
        "tiling": _constants.known_tiling_numbers(),
        "what_hat": _constants.what_hat(n)[0],
        "wills_ball": _constants.wills_ball(n),
    }
    _emit({"config": _config(args), "table": table}, args)
    return 0


def cmd_estimate(args) -> int:
    args.seed = _resolve_seed(args)
    body = parse_body(args.body, args.dim)
    if args.method == "exact":
        vec = _meas.intrinsic_volumes_exact(body) if isinstance(body, Polytope) \
            else _dev.intrinsic_vector(body)
        result = vec.to_dict()
    elif args.method == "steiner":
        result = _meas.steiner_fit(body, samples=args.samples, seed=args.seed).to_dict()
    elif args.method == "radial-steiner":
        result = _meas.radial_steiner_fit(body, samples=args.samples, seed=args.seed).to_dict()
    elif args.method == "kubota":
        if args.j is None:
            raise ValueError("kubota needs --j")
        result = _meas.kubota_estimate(body, args.j, samples=args.samples,
                                       seed=args.seed).to_dict()
    elif args.method == "dual":
        q = args.q if args.q is not None else float(body.n)
        result = _meas.dual_volume(body, q, samples=args.samples, seed=args.seed).to_dict()
    elif args.method == "omega":
        q = args.q if args.q is not None else float(body.n)
        result = _meas.omega_q(body, q, samples=args.samples, seed=args.seed).to_dict()
    else:
        raise ValueError(f"unknown method {args.method!r}")
    _emit({"config": _config(args, method=args.method), "result": result}, args)
    return 0


def _parse_moments(spec: str, n: int) -> _dev.MomentSequence:
    if spec == "weibull":
        return _dev.MomentSequence.wills_weibull(n)
    if spec.startswith("constant"):
        r = float(spec.split(":")[1]) if ":" in spec else 1.0
        return _dev.MomentSequence.constant(r, n)
    raise ValueError("--moments must be weibull or constant[:r]")


def cmd_deviation(args) -> int:
    args.seed = _resolve_seed(args)
    k = parse_body(args.body, args.dim)
    kwargs = {"samples": args.samples, "seed": args.seed}
    if args.kind in ("wills", "dual-wills"):
        rep = _dev.wills(k, **kwargs) if args.kind == "wills" else _dev.dual_wills(k, **kwargs)
        result = {"sum_form": rep.sum_form.to_dict(),
                  "integral_form": rep.integral_form.to_dict(),
                  "agree_3sigma": rep.agree_within()}
        _emit({"config": _config(args, kind=args.kind), "result": result}, args)
        return 0
    if args.other is None:
        raise ValueError(f"--other is required for kind {args.kind!r}")
    l = parse_body(args.other, args.dim)
    if args.kind == "delta":
        if args.j is None:
            raise ValueError("kind delta needs --j")
        rep = _dev.delta_j(k, l, args.j, **kwargs)
    elif args.kind == "delta-sigma":
        rep = _dev.delta_sigma(k, l, **kwargs)
    elif args.kind == "delta-lambda":
        rep = _dev.delta_lambda(k, l, _parse_moments(args.moments, args.dim), **kwargs)
    elif args.kind == "dual":
        q = args.q if args.q is not None else float(args.dim)
        rep = _dev.dual_delta(k, l, q, **kwargs)
    elif args.kind == "dual-sigma":
        rep = _dev.dual_delta_sigma(k, l, **kwargs)
    elif args.kind == "dual-lambda":
        rep = _dev.dual_delta_lambda(k, l, _parse_moments(args.moments, args.dim), **kwargs)
    elif args.kind == "delta1":
        rep = _dev.delta1_comparison(k, l, **kwargs)
        _emit({"config": _config(args, kind=args.kind), "result": rep.to_dict()}, args)
        return 0
    else:
        raise ValueError(f"unknown deviation kind {args.kind!r}")
    _emit({"config": _config(args, kind=args.kind), "result": rep.to_dict()}, args)
    return 0


def cmd_random_limit(args) -> int:
    args.seed = _resolve_seed(args)
    if args.dim > 3:
        raise ValueError("random-limit uses exact deviations; --dim must be 2 or 3")
    budgets = [int(v) for v in args.N.split(",")]
    j = args.j if args.j is not None else args.dim
    construction = partial(_rand.uniform_sphere_hull, n=args.dim)
    functional = partial(_rand.ball_deviation_exact, j=j)
    result = _rand.expectation_harness(construction, functional, budgets,
                                       args.trials, seed=args.seed,
                                       dimension=args.dim, threads=args.threads)
    payload = {"config": _config(args), "result": result.to_dict()}
    if args.out:
        _write_csv(args.out + ".csv", ["N", "trials", "scaled_mean", "std_error"],
                   [(s.budget, s.trials, s.scaled_mean, s.std_error)
                    for s in result.summaries])
        with open(args.out + ".json", "w") as fh:
            json.dump(payload, fh, sort_keys=True)
        from .plots import harness_plot
        harness_plot(result, args.out + ".png",
                     label=f"n={args.dim}, j={j}")
        args._files_written = True
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_optimize(args) -> int:
    args.seed = _resolve_seed(args)
    body = parse_body(args.body, args.dim)
    config = _opt.OptimizerConfig(restarts=args.restarts, steps=args.steps,
                                  seed=args.seed, mc_samples=args.samples)
    j = args.j if args.j is not None else args.dim
    if args.mode == "inscribed":
        res = _opt.best_inscribed(body, args.N, j=j, config=config)
    elif args.mode == "circumscribed":
        res = _opt.best_circumscribed(body, args.N, j=j, config=config)
    else:
        raise ValueError("mode must be inscribed or circumscribed")
    _emit({"config": _config(args, mode=args.mode, restarts=args.restarts,
                             steps=args.steps), "result": res.to_dict()}, args)
    return 0


def cmd_counterexample(args) -> int:
    args.seed = _resolve_seed(args)
    res = _dev.triangle_violation(args.dim, args.j, args.eps,
                                  samples=args.samples, seed=args.seed)
    _emit({"config": _config(args, eps=args.eps), "result": res.to_dict()}, args)
    return 0


def cmd_figure1(args) -> int:
    args.seed = _resolve_seed(args)
    grid = np.arange(args.hmin, args.hmax + 0.5 * args.step, args.step)
    rows = _dev.figure1_curves(grid)
    mc_rows = []
    if args.samples > 0:
        mc_at = [float(v) for v in args.mc_at.split(",")]
        mc_rows = _dev.figure1_curves(mc_at, samples=args.samples, seed=args.seed)
    merged = {r.h: r for r in rows}
    for r in mc_rows:
        merged[r.h] = r
    ordered = [merged[h] for h in sorted(merged)]
    payload = {"config": _config(args, hmin=args.hmin, hmax=args.hmax, step=args.step),
               "mc_rows": [r.to_dict() for r in mc_rows],
               "grid_min_pi_delta1_at": float(grid[int(np.argmin([r.pi_delta1_closed for r in rows]))]),
               "grid_min_delta1_at": float(grid[int(np.argmin([r.delta1_closed for r in rows]))])}
    if args.out:
        header = ["h", "pi_delta1_closed", "delta1_closed",
                  "pi_delta1_mc", "pi_delta1_mc_std", "delta1_mc", "delta1_mc_std"]
        _write_csv(args.out + ".csv", header,
                   [[getattr(r, k) if getattr(r, k) is not None else "" for k in header]
                    for r in ordered])
        with open(args.out + ".json", "w") as fh:
            json.dump(payload, fh, sort_keys=True)
        from .plots import figure1_plot
        figure1_plot(ordered, args.out + ".png")
        args._files_written = True
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    args.seed = args.seed if args.seed is not None else 0
    records = _constants.appendix_b_suite(args.nmax)
    failures = _constants.suite_findings(records)
    expected = _constants.findings_all_expected(records)
    corpus = _corpus.run_quick_corpus(seed=args.seed)
    corpus_ok = all(c.ok for c in corpus)
    payload = {"config": _config(args, nmax=args.nmax),
               "inequalities_checked": len(records),
               "inequality_failures": [r.to_dict() for r in failures],
               "all_failures_expected": expected,
               "corpus": [c.to_dict() for c in corpus],
               "corpus_ok": corpus_ok}
    _emit(payload, args)
    return 0 if (corpus_ok and expected) else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyapprox",
        description="Polytopal approximation toolkit: deviations, random "
                    "polytopes, best approximation, constants.",
        epilog=BODY_GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, body=False, other=False):
        p.add_argument("--dim", type=int, default=2, help="ambient dimension n")
        p.add_argument("--j", type=int, default=None, help="intrinsic volume index")
        p.add_argument("--q", type=float, default=None, help="dual volume index")
        p.add_argument("--samples", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", type=str, default=None,
                       help="output stem; writes <out>.json/<out>.csv/<out>.png")
        if body:
            p.add_argument("--body", type=str, required=True)
        if other:
            p.add_argument("--other", type=str, default=None)

    p = sub.add_parser("constants", help="alpha/beta tables and the inequality suite")
    common(p)
    p.add_argument("--suite", action="store_true")
    p.add_argument("--nmax", type=int, default=1000)
    p.add_argument("--json", action="store_true", help="JSON output (default)")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("estimate", help="intrinsic/dual volume estimates of one body")
    common(p, body=True)
    p.add_argument("--method", type=str, default="steiner",
                   choices=["exact", "steiner", "radial-steiner", "kubota", "dual", "omega"])
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("deviation", help="deviation functionals between two bodies")
    common(p, body=True, other=True)
    p.add_argument("--kind", type=str, default="delta",
                   choices=["delta", "delta-sigma", "delta-lambda", "dual",
                            "dual-sigma", "dual-lambda", "delta1", "wills", "dual-wills"])
    p.add_argument("--moments", type=str, default="weibull",
                   help="moment sequence: weibull or constant[:r]")
    p.set_defaults(func=cmd_deviation)

    p = sub.add_parser("random-limit", help="scaled expectation harness for random hulls")
    common(p)
    p.add_argument("--N", type=str, required=True, help="comma-separated budgets")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_random_limit)

    p = sub.add_parser("optimize", help="best-approximating polytope search")
    common(p)
    p.add_argument("--body", type=str, default="ball")
    p.add_argument("--mode", type=str, default="inscribed",
                   choices=["inscribed", "circumscribed"])
    p.add_argument("--N", type=int, required=True, help="vertex/facet budget")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--steps", type=int, default=2000)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("counterexample", help="triangle-inequality failure for caps")
    common(p)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("figure1", help="disk/triangle distance curves")
    common(p)
    p.add_argument("--hmin", type=float, default=-0.9)
    p.add_argument("--hmax", type=float, default=3.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--mc-at", type=str, default="-0.5,0,0.5,1,2")
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("verify", help="inequality suite plus the invariant corpus")
    common(p)
    p.add_argument("--nmax", type=int, default=1000)
    p.add_argument("--json", action="store_true", help="JSON output (default)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        print(f"estimator failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
