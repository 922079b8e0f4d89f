"""Command-line entry point: ``qslverify <command> ...``.

Exit codes: 0 success (no bound violated), 1 a bound was violated,
2 input or usage error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import harness
from ._moments import std_dev
from .bounds import bound_curves
from .errors import NearSingular, QSLError, SingularOverlap
from .io import encode_complex, load_problem, state_from_problem, write_csv, write_text
from .linalg_core import Config, random_hermitian, random_pure_state
from .metrics import (distance_rate_analytic, fs_path_length_curve, overlap_curve,
                      overlap_derivative_curve)
from .speed_limits import check_saturation, optimal_state, speed_limit_report

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

SWEEP_HEADER = ["theta", "overlap", "s_w", "s", "ds_dtheta_fd", "ds_dtheta_analytic",
                "mt_bound", "ml_bound", "fs_path_length"]
COUNTEREXAMPLE_HEADER = ["theta", "overlap", "d_overlap_dtheta", "note"]
STATIONARY_TOL = 1e-12


class UsageError(Exception):
    pass


def _config(args, hbar=None) -> Config:
    value = args.hbar if args.hbar is not None else (hbar if hbar is not None else 1.0)
    return Config(hbar=value)


def _default_span(g, psi, cfg) -> float:
    dk = std_dev(g, psi)
    return 0.5 * math.pi * cfg.hbar / dk if dk > STATIONARY_TOL else 1.0


def cmd_sweep(args) -> int:
    problem = load_problem(args.problem)
    cfg = _config(args, problem.hbar)
    g = problem.generator()
    psi = state_from_problem(problem, g).amplitudes
    theta_max = problem.theta_max or _default_span(g, psi, cfg)
    n = args.grid or problem.grid_points
    thetas = theta_max * np.arange(1, n + 1) / n

    curves = bound_curves(g, psi, thetas, ("k_min",), cfg)
    overlap = overlap_curve(g, psi, thetas, cfg)
    path = fs_path_length_curve(g, psi, thetas, cfg)
    rows = []
    for i, theta in enumerate(thetas):
        try:
            analytic = distance_rate_analytic(g, psi, theta, cfg)
        except (NearSingular, SingularOverlap):
            analytic = None
        rows.append([theta, overlap[i], curves.s[i] / 2.0, curves.s[i], curves.rate[i],
                     analytic, curves.mt_bound, curves.ml_bound[i], path[i]])
    write_csv(args.out, SWEEP_HEADER, rows)
    violated = (~curves.holds_mt).any() or (~curves.holds_ml & curves.in_band).any()
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_speed_limits(args) -> int:
    problem = load_problem(args.problem)
    cfg = _config(args, problem.hbar)
    g = problem.generator()
    psi = state_from_problem(problem, g).amplitudes
    report = speed_limit_report(g, psi, cfg, s_max=args.s_max, theta_max=problem.theta_max)
    write_text(args.out, harness.canonical_json(report.as_dict()))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        dims = tuple(int(x) for x in args.dims.split(",") if x.strip())
        spec = harness.CampaignSpec(n_instances=args.instances, dims=dims,
                                    grid_points=args.grid, seed=args.seed)
        mixed_spec = replace(spec, n_instances=args.mixed_instances)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cfg = _config(args)
    bound = harness.run_bound_campaign(spec, cfg, workers=args.workers)
    counter = harness.run_counterexample_campaign(spec, cfg, workers=args.workers)
    purified = harness.run_purified_campaign(mixed_spec, cfg, workers=args.workers)
    ok = (bound.summary["violation_count"] == 0
          and purified.summary["violation_count"] == 0
          and counter.summary["complete"])
    payload = {
        "spec": spec.as_dict(),
        "hbar": cfg.hbar,
        "bound": bound.as_dict(include_instances=False),
        "counterexample": counter.as_dict(include_instances=False),
        "purified": purified.as_dict(include_instances=False),
        "passed": ok,
    }
    write_text(args.out, harness.canonical_json(payload))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_counterexample(args) -> int:
    if args.problem is not None:
        problem = load_problem(args.problem)
        cfg = _config(args, problem.hbar)
        g = problem.generator()
        psi = state_from_problem(problem, g).amplitudes
        theta_max = problem.theta_max
    elif args.seed is not None:
        cfg = _config(args)
        rng = np.random.default_rng(args.seed)
        g = random_hermitian(args.dim, rng)
        psi = random_pure_state(args.dim, rng).amplitudes
        theta_max = None
    else:
        raise UsageError("give --problem or --seed")
    if theta_max is None:
        theta_max = 4.0 * _default_span(g, psi, cfg)
    lo = 1e-5
    if theta_max <= lo:
        raise UsageError("theta_max must exceed 1e-5")
    thetas = np.geomspace(lo, theta_max, args.points)
    mag, deriv = overlap_derivative_curve(g, psi, thetas, cfg)
    stationary = std_dev(g, psi) <= STATIONARY_TOL
    rows = []
    for theta, m, dz in zip(thetas, mag, deriv):
        if stationary:
            rows.append([theta, m, 0.0, "stationary"])
        elif np.isnan(dz):
            rows.append([theta, m, None, "singular"])
        else:
            rows.append([theta, m, dz, ""])
    write_csv(args.out, COUNTEREXAMPLE_HEADER, rows)
    return EXIT_OK


def cmd_optimal(args) -> int:
    problem = load_problem(args.problem)
    cfg = _config(args, problem.hbar)
    g = problem.generator()
    psi = optimal_state(g, args.phi)
    saturates_mt, geodesic = check_saturation(g, psi, cfg)
    report = speed_limit_report(g, psi.amplitudes, cfg)
    payload = {
        "phi": args.phi,
        "state": encode_complex(psi.amplitudes),
        "saturates_mt": saturates_mt,
        "geodesic": geodesic,
        "report": report.as_dict(),
    }
    write_text(args.out, harness.canonical_json(payload))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qslverify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, problem=True):
        p = sub.add_parser(name, help=help_text)
        if problem:
            p.add_argument("problem", help="problem file (JSON)")
        p.add_argument("--out", "-o", default="-", help="output path, '-' for stdout")
        p.add_argument("--hbar", type=float, default=None, help="override hbar")
        p.set_defaults(func=fn)
        return p

    p = add("sweep", cmd_sweep, "tabulate distances, rates and bounds on a theta grid")
    p.add_argument("--grid", type=int, default=None, help="number of grid points")

    p = add("speed-limits", cmd_speed_limits, "speed limits and orthogonality time")
    p.add_argument("--s-max", type=float, default=math.pi, dest="s_max")

    p = add("verify", cmd_verify, "run the randomized verification campaigns", problem=False)
    p.add_argument("--instances", type=int, default=500)
    p.add_argument("--mixed-instances", type=int, default=100, dest="mixed_instances")
    p.add_argument("--dims", default="2,3,4,5,6,7,8")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--workers", type=int, default=1)

    p = add("counterexample", cmd_counterexample,
            "overlap derivative on a log grid, showing it is negative at small theta",
            problem=False)
    p.add_argument("--problem", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--points", type=int, default=200)

    p = add("optimal", cmd_optimal, "construct and check the optimal state of a generator",
            problem=False)
    p.add_argument("--problem", required=True, help="problem file; only k and hbar are used")
    p.add_argument("--phi", type=float, default=0.0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (QSLError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
